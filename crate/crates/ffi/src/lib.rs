//! C ABI over `gaussian_perfect`.
//!
//! Values cross the boundary as opaque `GpGaussian` handles. Every fallible
//! call returns a `GpStatus`; on failure a thread-local message is available
//! from `gp_last_error_message`. Strings returned through `char **` out
//! parameters are owned by the caller and released with `gp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gaussian_perfect::search::scan_sharded;
use gaussian_perfect::{
    classify, factor, is_gaussian_prime, sigma, verify_theorem, GaussError, GaussianInt, KindFilter, ParityFilter,
    SearchConfig,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Zero = 4,
    Domain = 5,
    InvalidConfig = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpParity {
    All = 0,
    Odd = 1,
    Even = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpKind {
    NormPerfect = 0,
    Perfect = 1,
    Both = 2,
}

/// Counters of a completed search.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GpScanSummary {
    pub bound: u64,
    pub shards: u32,
    pub scanned: u64,
    pub emitted: u64,
    pub errors: u64,
}

/// Counters of an odd-form theorem check.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GpTheoremSummary {
    pub bound: u64,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub k_one_mod_four: u64,
    pub k_three_mod_four: u64,
}

/// Opaque handle to an exact Gaussian integer.
pub struct GpGaussian(GaussianInt);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GpStatus, String);

impl From<GaussError> for Failure {
    fn from(e: GaussError) -> Self {
        let status = match e {
            GaussError::Parse(_) => GpStatus::Parse,
            GaussError::ZeroInput(_) | GaussError::DivisionByZero | GaussError::BothZero => GpStatus::Zero,
            GaussError::InvalidConfig(_) => GpStatus::InvalidConfig,
            _ => GpStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            GpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside gaussian_perfect".into());
            GpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(GpStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn value<'a>(z: *const GpGaussian) -> Result<&'a GaussianInt, Failure> {
    z.as_ref().map(|h| &h.0).ok_or_else(|| null("value"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(GpStatus::Domain, e.to_string()))?;
    write(out, c.into_raw())
}

fn handle(z: GaussianInt) -> *mut GpGaussian {
    Box::into_raw(Box::new(GpGaussian(z)))
}

/// Parses a literal such as `3-4i` into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_parse(text: *const c_char, out: *mut *mut GpGaussian) -> GpStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| Failure(GpStatus::InvalidUtf8, e.to_string()))?;
        let z: GaussianInt = s.parse()?;
        write(out, handle(z))
    })
}

/// Creates a handle from 64-bit components. Never returns null.
#[no_mangle]
pub extern "C" fn gp_gaussian_new(re: i64, im: i64) -> *mut GpGaussian {
    handle(GaussianInt::from_i64(re, im))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `z` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_free(z: *mut GpGaussian) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_to_string(z: *const GpGaussian, out: *mut *mut c_char) -> GpStatus {
    guard(|| write_string(out, value(z)?.to_string()))
}

/// Components as 64-bit integers; `GP_STATUS_DOMAIN` if either overflows.
///
/// # Safety
/// `z` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_components(z: *const GpGaussian, re: *mut i64, im: *mut i64) -> GpStatus {
    guard(|| {
        let z = value(z)?;
        let overflow = || Failure(GpStatus::Domain, format!("{z} does not fit in 64-bit components"));
        let a = i64::try_from(&z.re).map_err(|_| overflow())?;
        let b = i64::try_from(&z.im).map_err(|_| overflow())?;
        write(re, a)?;
        write(im, b)
    })
}

/// Norm as a decimal string.
///
/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_norm(z: *const GpGaussian, out: *mut *mut c_char) -> GpStatus {
    guard(|| write_string(out, value(z)?.norm().to_string()))
}

/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_is_even(z: *const GpGaussian, out: *mut bool) -> GpStatus {
    guard(|| write(out, value(z)?.is_even()))
}

/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_gaussian_is_prime(z: *const GpGaussian, out: *mut bool) -> GpStatus {
    guard(|| write(out, is_gaussian_prime(value(z)?)))
}

/// Sum of divisors as a new handle.
///
/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_sigma(z: *const GpGaussian, out: *mut *mut GpGaussian) -> GpStatus {
    guard(|| {
        let s = sigma(value(z)?)?;
        write(out, handle(s))
    })
}

/// Canonical factorization in text form, e.g. `-i * (1+2i)^1 * (2+i)^1`.
///
/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_factor(z: *const GpGaussian, out: *mut *mut c_char) -> GpStatus {
    guard(|| write_string(out, factor(value(z)?)?.to_string()))
}

/// Perfection report as a JSON object.
///
/// # Safety
/// `z` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_classify_json(z: *const GpGaussian, out: *mut *mut c_char) -> GpStatus {
    guard(|| {
        let report = classify(value(z)?)?;
        let json = serde_json::to_string(&report).map_err(|e| Failure(GpStatus::Domain, e.to_string()))?;
        write_string(out, json)
    })
}

/// Runs a search over `shards` concurrent shards and returns the merged
/// records as JSON lines. `summary` may be null.
///
/// # Safety
/// `out` must be writable; `summary` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn gp_search_json(
    bound: u64,
    parity: GpParity,
    kind: GpKind,
    shards: u32,
    out: *mut *mut c_char,
    summary: *mut GpScanSummary,
) -> GpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let parity = match parity {
            GpParity::All => ParityFilter::All,
            GpParity::Odd => ParityFilter::Odd,
            GpParity::Even => ParityFilter::Even,
        };
        let kinds = match kind {
            GpKind::NormPerfect => KindFilter::NORM_PERFECT,
            GpKind::Perfect => KindFilter::PERFECT,
            GpKind::Both => KindFilter::BOTH,
        };
        let config = SearchConfig::new(bound).with_parity(parity).with_kinds(kinds);
        let mut text = String::new();
        let s = scan_sharded(&config, shards, |item| {
            text.push_str(&item.to_json_line());
            text.push('\n');
        })?;
        if !summary.is_null() {
            summary.write(GpScanSummary {
                bound: s.bound,
                shards: s.shards,
                scanned: s.scanned,
                emitted: s.emitted,
                errors: s.errors,
            });
        }
        write_string(out, text)
    })
}

/// Checks the odd-form theorem for every odd norm-perfect subject up to `bound`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_verify_theorem(bound: u64, out: *mut GpTheoremSummary) -> GpStatus {
    guard(|| {
        let v = verify_theorem(bound)?;
        write(
            out,
            GpTheoremSummary {
                bound: v.bound,
                checked: v.checked,
                passed: v.passed,
                failed: v.failed,
                k_one_mod_four: v.k_mod_four[1],
                k_three_mod_four: v.k_mod_four[3],
            },
        )
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn gp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
