//! Exact arithmetic in the ring of Gaussian integers `Z[i]`.
//!
//! Values are pairs of arbitrary-precision integers, so nothing ever rounds
//! or wraps. The first-quadrant convention (`Re > 0`, `Im >= 0`) picks the
//! canonical member of each associate class.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GaussError, Result};

/// One of the four units `1, i, -1, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    One,
    I,
    NegOne,
    NegI,
}

impl Unit {
    /// All units in the order `1, i, -1, -i` (successive powers of `i`).
    pub const ALL: [Unit; 4] = [Unit::One, Unit::I, Unit::NegOne, Unit::NegI];

    fn exponent(self) -> u8 {
        match self {
            Unit::One => 0,
            Unit::I => 1,
            Unit::NegOne => 2,
            Unit::NegI => 3,
        }
    }

    fn from_exponent(e: u8) -> Unit {
        Unit::ALL[(e % 4) as usize]
    }

    pub fn inverse(self) -> Unit {
        Unit::from_exponent(4 - self.exponent())
    }

    pub fn value(self) -> GaussianInt {
        match self {
            Unit::One => GaussianInt::from_i64(1, 0),
            Unit::I => GaussianInt::from_i64(0, 1),
            Unit::NegOne => GaussianInt::from_i64(-1, 0),
            Unit::NegI => GaussianInt::from_i64(0, -1),
        }
    }

    /// Returns the unit equal to `value`, if `value` is one.
    pub fn from_value(value: &GaussianInt) -> Option<Unit> {
        Unit::ALL.into_iter().find(|u| u.value() == *value)
    }

    /// Multiplies a Gaussian integer by this unit; a coordinate rotation, no multiplication.
    pub fn apply(self, z: &GaussianInt) -> GaussianInt {
        match self {
            Unit::One => z.clone(),
            Unit::I => GaussianInt::new(-&z.im, z.re.clone()),
            Unit::NegOne => -z,
            Unit::NegI => GaussianInt::new(z.im.clone(), -&z.re),
        }
    }
}

impl Mul for Unit {
    type Output = Unit;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Unit) -> Unit {
        Unit::from_exponent(self.exponent() + rhs.exponent())
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::One => "1",
            Unit::I => "i",
            Unit::NegOne => "-1",
            Unit::NegI => "-i",
        })
    }
}

impl Serialize for Unit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A Gaussian integer `re + im*i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussianInt::new(re, im)
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn one() -> Self {
        GaussianInt::from_i64(1, 0)
    }

    /// `1 + i`, the unique canonical prime above 2.
    pub fn one_plus_i() -> Self {
        GaussianInt::from_i64(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        Unit::from_value(self).is_some()
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigUint {
        let n = &self.re * &self.re + &self.im * &self.im;
        n.to_biguint().expect("sum of squares is non-negative")
    }

    pub fn conj(&self) -> Self {
        GaussianInt::new(self.re.clone(), -&self.im)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = GaussianInt::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// True iff `1 + i` divides `self`, i.e. both components share parity.
    pub fn is_even(&self) -> bool {
        self.re.is_even() == self.im.is_even()
    }

    /// True iff `Re > 0` and `Im >= 0`.
    pub fn is_canonical(&self) -> bool {
        self.re.is_positive() && !self.im.is_negative()
    }

    /// The four associates `self, i*self, -self, -i*self`.
    pub fn associates(&self) -> Result<[GaussianInt; 4]> {
        if self.is_zero() {
            return Err(GaussError::ZeroInput("associates"));
        }
        Ok(Unit::ALL.map(|u| u.apply(self)))
    }

    /// Splits `self` as `unit * canonical` with the canonical factor in the
    /// half-open first quadrant.
    pub fn canonicalize(&self) -> Result<(Unit, GaussianInt)> {
        if self.is_zero() {
            return Err(GaussError::ZeroInput("canonicalize"));
        }
        for unit in Unit::ALL {
            let candidate = unit.inverse().apply(self);
            if candidate.is_canonical() {
                return Ok((unit, candidate));
            }
        }
        unreachable!("every nonzero Gaussian integer has a first-quadrant associate")
    }

    /// Exact division test. Returns the quotient `k` with `self = divisor * k`
    /// when it exists.
    pub fn exact_div(&self, divisor: &GaussianInt) -> Result<Option<GaussianInt>> {
        if divisor.is_zero() {
            return Err(GaussError::DivisionByZero);
        }
        let n = BigInt::from_biguint(Sign::Plus, divisor.norm());
        let num = self * &divisor.conj();
        let (qr, rr) = num.re.div_rem(&n);
        if !rr.is_zero() {
            return Ok(None);
        }
        let (qi, ri) = num.im.div_rem(&n);
        if !ri.is_zero() {
            return Ok(None);
        }
        Ok(Some(GaussianInt::new(qr, qi)))
    }

    /// True iff `divisor | self`.
    pub fn is_divisible_by(&self, divisor: &GaussianInt) -> Result<bool> {
        Ok(self.exact_div(divisor)?.is_some())
    }

    /// Euclidean division with each quotient coordinate rounded to the
    /// nearest integer (ties to even). The remainder satisfies
    /// `2 * norm(r) <= norm(divisor)`.
    pub fn div_rem_rounded(&self, divisor: &GaussianInt) -> Result<(GaussianInt, GaussianInt)> {
        if divisor.is_zero() {
            return Err(GaussError::DivisionByZero);
        }
        let n = BigInt::from_biguint(Sign::Plus, divisor.norm());
        let num = self * &divisor.conj();
        let q = GaussianInt::new(round_div(&num.re, &n), round_div(&num.im, &n));
        let r = self - &(divisor * &q);
        Ok((q, r))
    }

    /// Canonical greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &GaussianInt) -> Result<GaussianInt> {
        if self.is_zero() && other.is_zero() {
            return Err(GaussError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem_rounded(&b)?;
            a = b;
            b = r;
        }
        Ok(a.canonicalize()?.1)
    }

    /// Sort key `(norm, re, im)`.
    pub fn cmp_by_norm(&self, other: &GaussianInt) -> Ordering {
        self.norm().cmp(&other.norm()).then_with(|| self.re.cmp(&other.re)).then_with(|| self.im.cmp(&other.im))
    }
}

/// Nearest integer to `x / n` for `n > 0`, ties to even.
fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    let (q, r) = x.div_mod_floor(n);
    let twice: BigInt = &r << 1usize;
    match twice.cmp(n) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

impl Ord for GaussianInt {
    /// Orders by `(norm, re, im)`, the order in which factorizations and
    /// search streams are emitted.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_by_norm(other)
    }
}

impl PartialOrd for GaussianInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Unit> for GaussianInt {
    fn from(u: Unit) -> Self {
        u.value()
    }
}

impl From<i64> for GaussianInt {
    fn from(n: i64) -> Self {
        GaussianInt::new(n, 0)
    }
}

impl From<BigInt> for GaussianInt {
    fn from(n: BigInt) -> Self {
        GaussianInt::new(n, BigInt::zero())
    }
}

impl From<BigUint> for GaussianInt {
    fn from(n: BigUint) -> Self {
        GaussianInt::new(BigInt::from_biguint(Sign::Plus, n), BigInt::zero())
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for GaussianInt {
            type Output = GaussianInt;
            fn $f(self, rhs: GaussianInt) -> GaussianInt {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&GaussianInt> for GaussianInt {
            type Output = GaussianInt;
            fn $f(self, rhs: &GaussianInt) -> GaussianInt {
                (&self).$f(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        -&self
    }
}

impl Zero for GaussianInt {
    fn zero() -> Self {
        GaussianInt::default()
    }

    fn is_zero(&self) -> bool {
        GaussianInt::is_zero(self)
    }
}

impl One for GaussianInt {
    fn one() -> Self {
        GaussianInt::from_i64(1, 0)
    }
}

impl std::iter::Sum for GaussianInt {
    fn sum<I: Iterator<Item = GaussianInt>>(iter: I) -> Self {
        iter.fold(GaussianInt::zero(), |acc, z| acc + z)
    }
}

impl std::iter::Product for GaussianInt {
    fn product<I: Iterator<Item = GaussianInt>>(iter: I) -> Self {
        iter.fold(GaussianInt::one(), |acc, z| acc * z)
    }
}

impl fmt::Display for GaussianInt {
    /// Writes `a+bi`, `a-bi`, `a`, or `bi`, dropping a unit coefficient on `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.im.is_one() {
            f.write_str("i")
        } else if (-&self.im).is_one() {
            f.write_str("-i")
        } else {
            write!(f, "{}i", self.im)
        }
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for GaussianInt {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GaussError::Parse(s.to_string());
        let Some(body) = s.strip_suffix('i') else {
            return parse_integer(s).map(GaussianInt::from).ok_or_else(bad);
        };
        // The imaginary coefficient starts at the last sign that is not the leading one.
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(idx, _)| idx).last();
        let (re_text, im_text) = match split {
            Some(idx) => body.split_at(idx),
            None => ("", body),
        };
        let re = if re_text.is_empty() { BigInt::zero() } else { parse_integer(re_text).ok_or_else(bad)? };
        let im = match im_text {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            t => parse_integer(t).ok_or_else(bad)?,
        };
        Ok(GaussianInt::new(re, im))
    }
}

impl Serialize for GaussianInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::from_i64(re, im)
    }

    #[test]
    fn addition() {
        assert_eq!(g(2, 1) + g(1, 2), g(3, 3));
        assert_eq!(g(7, -4) + GaussianInt::zero(), g(7, -4));
        assert_eq!(g(2, 1) + g(-2, -1), GaussianInt::zero());
    }

    #[test]
    fn multiplication() {
        assert_eq!(g(1, 1) * g(1, 1), g(0, 2));
        assert_eq!(g(2, 1) * g(2, -1), g(5, 0));
        let p = g(1, 2) * g(2, 1);
        assert_eq!(p, g(0, 5));
        assert_eq!(p.norm(), BigUint::from(25u32));
    }

    #[test]
    fn norms() {
        assert_eq!(g(2, 1).norm(), BigUint::from(5u32));
        assert_eq!(GaussianInt::zero().norm(), BigUint::zero());
        assert_eq!(g(1, 1).norm(), BigUint::from(2u32));
    }

    #[test]
    fn exact_division() {
        assert_eq!(g(3, 7).exact_div(&g(1, 1)).unwrap(), Some(g(5, 2)));
        assert_eq!(g(2, 1).exact_div(&g(1, 1)).unwrap(), None);
        assert_eq!(g(5, 0).exact_div(&g(2, 1)).unwrap(), Some(g(2, -1)));
        assert_eq!(g(5, 0).exact_div(&GaussianInt::zero()), Err(GaussError::DivisionByZero));
    }

    #[test]
    fn evenness() {
        assert!(g(1, 1).is_even());
        assert!(!g(2, 1).is_even());
        assert!(g(3, 7).is_even());
        assert!(GaussianInt::zero().is_even());
    }

    #[test]
    fn associate_sets() {
        assert_eq!(g(2, -1).associates().unwrap(), [g(2, -1), g(1, 2), g(-2, 1), g(-1, -2)]);
        assert_eq!(g(1, 0).associates().unwrap(), [g(1, 0), g(0, 1), g(-1, 0), g(0, -1)]);
        assert_eq!(g(1, 1).associates().unwrap(), [g(1, 1), g(-1, 1), g(-1, -1), g(1, -1)]);
        assert!(GaussianInt::zero().associates().is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(g(2, -1).canonicalize().unwrap(), (Unit::NegI, g(1, 2)));
        assert_eq!(g(5, 0).canonicalize().unwrap(), (Unit::One, g(5, 0)));
        assert_eq!(g(-3, 0).canonicalize().unwrap(), (Unit::NegOne, g(3, 0)));
        assert_eq!(g(0, 4).canonicalize().unwrap(), (Unit::I, g(4, 0)));
        assert_eq!(GaussianInt::zero().canonicalize(), Err(GaussError::ZeroInput("canonicalize")));
    }

    #[test]
    fn gcds() {
        assert_eq!(g(5, 0).gcd(&g(2, 1)).unwrap(), g(2, 1));
        assert_eq!(g(2, 1).gcd(&g(1, 2)).unwrap(), g(1, 0));
        assert_eq!(g(-4, 3).gcd(&g(-4, 3)).unwrap(), g(-4, 3).canonicalize().unwrap().1);
        assert_eq!(g(0, 0).gcd(&g(0, -3)).unwrap(), g(3, 0));
        assert_eq!(g(0, 0).gcd(&g(0, 0)), Err(GaussError::BothZero));
    }

    #[test]
    fn rounding_ties_go_to_even() {
        let two = BigInt::from(2);
        assert_eq!(round_div(&BigInt::from(1), &two), BigInt::from(0));
        assert_eq!(round_div(&BigInt::from(3), &two), BigInt::from(2));
        assert_eq!(round_div(&BigInt::from(-1), &two), BigInt::from(0));
        assert_eq!(round_div(&BigInt::from(-3), &two), BigInt::from(-2));
        assert_eq!(round_div(&BigInt::from(7), &BigInt::from(3)), BigInt::from(2));
    }

    #[test]
    fn units_form_a_group() {
        for a in Unit::ALL {
            assert_eq!(a * a.inverse(), Unit::One);
            assert_eq!(a.value().norm(), BigUint::one());
            for b in Unit::ALL {
                assert_eq!((a * b).value(), a.value() * b.value());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for (text, z) in [
            ("2+i", g(2, 1)),
            ("-1-2i", g(-1, -2)),
            ("0", g(0, 0)),
            ("3i", g(0, 3)),
            ("-i", g(0, -1)),
            ("i", g(0, 1)),
            ("17", g(17, 0)),
            ("-5", g(-5, 0)),
            ("4-i", g(4, -1)),
            ("-7+12i", g(-7, 12)),
        ] {
            assert_eq!(text.parse::<GaussianInt>().unwrap(), z, "{text}");
            assert_eq!(z.to_string(), text);
        }
    }

    #[test]
    fn rejects_malformed_literals() {
        for text in ["", "+", "2+", "2 + i", "2+3", "1+2*i", "ii", "2+i+i", "--1", "1-+2i", "a+bi", "1.5"] {
            assert_eq!(text.parse::<GaussianInt>(), Err(GaussError::Parse(text.to_string())), "{text:?}");
        }
    }
}
