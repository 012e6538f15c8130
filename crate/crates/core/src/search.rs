//! Exhaustive norm-bounded search for norm-perfect and perfect Gaussian
//! integers.
//!
//! The enumerator walks the first quadrant one norm window at a time, so a
//! scan never holds more than one window of lattice points. Shards split the
//! norm range into contiguous slices; each shard's stream is already sorted
//! and [`MergeByKey`] recombines them.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::mpsc;
use std::thread;

use num_bigint::BigInt;
use serde::Serialize;

use crate::divisor::{
    classify_with_factorization, odd_form_from_factorization, OddFormDecomposition, PerfectionReport,
};
use crate::error::{GaussError, Result};
use crate::factorization::is_gaussian_prime;
use crate::gaussian::GaussianInt;

/// Norm window size used by the enumerator.
const WINDOW: u64 = 1 << 16;

/// Largest norm bound accepted; keeps `a^2 + b^2` inside `u64`.
pub const MAX_NORM_BOUND: u64 = 1 << 62;

/// Canonical Gaussian integers with norm in `(low, high]`, in `(norm, re, im)` order.
#[derive(Debug, Clone)]
pub struct CanonicalEnumerator {
    next_low: u64,
    high: u64,
    buffer: VecDeque<(u64, i64, i64)>,
}

impl CanonicalEnumerator {
    pub fn new(low_exclusive: u64, high_inclusive: u64) -> Self {
        CanonicalEnumerator {
            next_low: low_exclusive,
            high: high_inclusive.min(MAX_NORM_BOUND),
            buffer: VecDeque::new(),
        }
    }

    fn refill(&mut self) {
        while self.buffer.is_empty() && self.next_low < self.high {
            let low = self.next_low;
            let high = low.saturating_add(WINDOW).min(self.high);
            let mut points = Vec::new();
            let a_max = high.isqrt();
            for a in 1..=a_max {
                let a_sq = a * a;
                let b_min = if a_sq > low { 0 } else { (low - a_sq).isqrt() + 1 };
                let b_max = (high - a_sq).isqrt();
                for b in b_min..=b_max {
                    points.push((a_sq + b * b, a as i64, b as i64));
                }
            }
            points.sort_unstable();
            self.buffer.extend(points);
            self.next_low = high;
        }
    }
}

impl Iterator for CanonicalEnumerator {
    type Item = (u64, GaussianInt);

    fn next(&mut self) -> Option<Self::Item> {
        self.refill();
        self.buffer.pop_front().map(|(n, a, b)| (n, GaussianInt::from_i64(a, b)))
    }
}

/// Every canonical `z` with `1 <= norm(z) <= norm_bound`, each associate
/// class exactly once, in `(norm, re, im)` order.
pub fn enumerate_canonical(norm_bound: u64) -> impl Iterator<Item = GaussianInt> {
    CanonicalEnumerator::new(0, norm_bound).map(|(_, z)| z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityFilter {
    #[default]
    All,
    Odd,
    Even,
}

impl ParityFilter {
    pub fn matches(self, z: &GaussianInt) -> bool {
        match self {
            ParityFilter::All => true,
            ParityFilter::Odd => !z.is_even(),
            ParityFilter::Even => z.is_even(),
        }
    }
}

impl FromStr for ParityFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(ParityFilter::All),
            "odd" => Ok(ParityFilter::Odd),
            "even" => Ok(ParityFilter::Even),
            other => Err(format!("unknown parity `{other}` (expected all, odd or even)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    NormPerfect,
    Perfect,
    NormPerfectPrime,
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordKind::NormPerfect => "norm_perfect",
            RecordKind::Perfect => "perfect",
            RecordKind::NormPerfectPrime => "norm_perfect_prime",
        })
    }
}

/// Which hits a scan emits. Every perfect number and every norm-perfect
/// prime is also norm-perfect, so `norm_perfect` admits all three kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindFilter {
    pub norm_perfect: bool,
    pub perfect: bool,
}

impl KindFilter {
    pub const NORM_PERFECT: KindFilter = KindFilter { norm_perfect: true, perfect: false };
    pub const PERFECT: KindFilter = KindFilter { norm_perfect: false, perfect: true };
    pub const BOTH: KindFilter = KindFilter { norm_perfect: true, perfect: true };

    pub fn matches(self, kind: RecordKind) -> bool {
        match kind {
            RecordKind::Perfect => self.perfect || self.norm_perfect,
            RecordKind::NormPerfect | RecordKind::NormPerfectPrime => self.norm_perfect,
        }
    }
}

impl Default for KindFilter {
    fn default() -> Self {
        KindFilter::NORM_PERFECT
    }
}

impl FromStr for KindFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "norm-perfect" => Ok(KindFilter::NORM_PERFECT),
            "perfect" => Ok(KindFilter::PERFECT),
            "both" => Ok(KindFilter::BOTH),
            other => Err(format!("unknown kind `{other}` (expected norm-perfect, perfect or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub norm_bound: u64,
    pub parity_filter: ParityFilter,
    pub kind_filter: KindFilter,
    pub shard_count: u32,
    pub shard_index: u32,
}

impl SearchConfig {
    pub fn new(norm_bound: u64) -> Self {
        SearchConfig {
            norm_bound,
            parity_filter: ParityFilter::All,
            kind_filter: KindFilter::NORM_PERFECT,
            shard_count: 1,
            shard_index: 0,
        }
    }

    pub fn with_parity(mut self, parity: ParityFilter) -> Self {
        self.parity_filter = parity;
        self
    }

    pub fn with_kinds(mut self, kinds: KindFilter) -> Self {
        self.kind_filter = kinds;
        self
    }

    pub fn with_shard(mut self, shard_index: u32, shard_count: u32) -> Self {
        self.shard_index = shard_index;
        self.shard_count = shard_count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.norm_bound == 0 {
            return Err(GaussError::InvalidConfig("norm bound must be at least 1".into()));
        }
        if self.norm_bound > MAX_NORM_BOUND {
            return Err(GaussError::InvalidConfig(format!("norm bound must not exceed {MAX_NORM_BOUND}")));
        }
        if self.shard_count == 0 {
            return Err(GaussError::InvalidConfig("shard count must be at least 1".into()));
        }
        if self.shard_index >= self.shard_count {
            return Err(GaussError::InvalidConfig(format!(
                "shard index {} is out of range for {} shards",
                self.shard_index, self.shard_count
            )));
        }
        Ok(())
    }

    /// The norm slice `(low, high]` owned by this shard.
    pub fn shard_range(&self) -> (u64, u64) {
        let cut = |j: u32| (j as u128 * self.norm_bound as u128 / self.shard_count as u128) as u64;
        (cut(self.shard_index), cut(self.shard_index + 1))
    }
}

/// One hit from a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchRecord {
    pub subject: GaussianInt,
    pub norm: u64,
    pub kind: RecordKind,
    pub report: PerfectionReport,
    pub decomposition: Option<OddFormDecomposition>,
}

/// A subject the scan could not classify, or one that contradicts the
/// odd-form theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanFailure {
    pub subject: GaussianInt,
    pub norm: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum ScanItem {
    Hit(SearchRecord),
    Failure(ScanFailure),
}

impl ScanItem {
    pub fn subject(&self) -> &GaussianInt {
        match self {
            ScanItem::Hit(r) => &r.subject,
            ScanItem::Failure(f) => &f.subject,
        }
    }

    pub fn norm(&self) -> u64 {
        match self {
            ScanItem::Hit(r) => r.norm,
            ScanItem::Failure(f) => f.norm,
        }
    }

    /// `(norm, re, im)`.
    pub fn key(&self) -> (u64, BigInt, BigInt) {
        let z = self.subject();
        (self.norm(), z.re.clone(), z.im.clone())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("scan items always serialize")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub bound: u64,
    pub shards: u32,
    pub scanned: u64,
    pub emitted: u64,
    pub errors: u64,
}

impl ScanSummary {
    fn absorb(&mut self, other: &ScanSummary) {
        self.scanned += other.scanned;
        self.emitted += other.emitted;
        self.errors += other.errors;
    }
}

/// Classifies one canonical subject against the scan filters.
pub fn examine(z: &GaussianInt, norm: u64, kinds: KindFilter) -> Option<ScanItem> {
    let failure = |error: String| Some(ScanItem::Failure(ScanFailure { subject: z.clone(), norm, error }));
    let (report, factorization) = match classify_with_factorization(z) {
        Ok(pair) => pair,
        Err(e) => return failure(e.to_string()),
    };
    if !report.is_norm_perfect {
        return None;
    }
    let kind = if report.is_perfect_class() {
        RecordKind::Perfect
    } else if is_gaussian_prime(z) {
        RecordKind::NormPerfectPrime
    } else {
        RecordKind::NormPerfect
    };
    if !kinds.matches(kind) {
        return None;
    }
    let decomposition = if z.is_even() {
        None
    } else {
        match odd_form_from_factorization(z, &factorization) {
            Ok(d) => {
                let coprime = d.pi.gcd(&d.gamma).map(|g| g == GaussianInt::one()).unwrap_or(false);
                if d.k % 2 == 0 || !coprime || d.reconstruct() != *z {
                    return failure(format!("odd form theorem violated by decomposition {d:?}"));
                }
                Some(d)
            }
            Err(e) => return failure(format!("odd form theorem violated: {e}")),
        }
    };
    Some(ScanItem::Hit(SearchRecord { subject: z.clone(), norm, kind, report, decomposition }))
}

/// Streaming scan over one shard.
#[derive(Debug)]
pub struct Scan {
    config: SearchConfig,
    subjects: CanonicalEnumerator,
    summary: ScanSummary,
}

impl Scan {
    pub fn new(config: SearchConfig) -> Result<Scan> {
        config.validate()?;
        let (low, high) = config.shard_range();
        Ok(Scan {
            summary: ScanSummary { bound: config.norm_bound, shards: 1, ..ScanSummary::default() },
            subjects: CanonicalEnumerator::new(low, high),
            config,
        })
    }

    /// Counts so far; final once the iterator is exhausted.
    pub fn summary(&self) -> ScanSummary {
        self.summary
    }
}

impl Iterator for Scan {
    type Item = ScanItem;

    fn next(&mut self) -> Option<ScanItem> {
        for (norm, z) in self.subjects.by_ref() {
            if !self.config.parity_filter.matches(&z) {
                continue;
            }
            self.summary.scanned += 1;
            if let Some(item) = examine(&z, norm, self.config.kind_filter) {
                match item {
                    ScanItem::Hit(_) => self.summary.emitted += 1,
                    ScanItem::Failure(_) => self.summary.errors += 1,
                }
                return Some(item);
            }
        }
        None
    }
}

/// Scans the shard selected by `config`.
pub fn scan(config: SearchConfig) -> Result<Scan> {
    Scan::new(config)
}

type HeapEntry = Reverse<((u64, BigInt, BigInt), usize)>;

/// K-way merge of streams that are each sorted by [`ScanItem::key`].
pub struct MergeByKey<I: Iterator<Item = ScanItem>> {
    sources: Vec<I>,
    heads: Vec<Option<ScanItem>>,
    heap: BinaryHeap<HeapEntry>,
}

impl<I: Iterator<Item = ScanItem>> MergeByKey<I> {
    pub fn new(sources: impl IntoIterator<Item = I>) -> Self {
        let mut merge =
            MergeByKey { sources: sources.into_iter().collect(), heads: Vec::new(), heap: BinaryHeap::new() };
        merge.heads = vec![None; merge.sources.len()];
        for idx in 0..merge.sources.len() {
            merge.pull(idx);
        }
        merge
    }

    fn pull(&mut self, idx: usize) {
        if let Some(item) = self.sources[idx].next() {
            self.heap.push(Reverse((item.key(), idx)));
            self.heads[idx] = Some(item);
        }
    }
}

impl<I: Iterator<Item = ScanItem>> Iterator for MergeByKey<I> {
    type Item = ScanItem;

    fn next(&mut self) -> Option<ScanItem> {
        let Reverse((_, idx)) = self.heap.pop()?;
        let item = self.heads[idx].take().expect("heap entry has a head");
        self.pull(idx);
        Some(item)
    }
}

/// Runs every shard of `config` on its own thread and feeds the merged,
/// globally ordered stream to `sink`. The shard fields of `config` are
/// replaced by `0..shard_count`.
pub fn scan_sharded(config: &SearchConfig, shard_count: u32, mut sink: impl FnMut(ScanItem)) -> Result<ScanSummary> {
    let shards: Vec<SearchConfig> =
        (0..shard_count.max(1)).map(|j| config.clone().with_shard(j, shard_count)).collect();
    for shard in &shards {
        shard.validate()?;
    }
    let mut summary = ScanSummary { bound: config.norm_bound, shards: shard_count, ..ScanSummary::default() };
    thread::scope(|scope| {
        let mut receivers = Vec::with_capacity(shards.len());
        let mut handles = Vec::with_capacity(shards.len());
        for shard in shards {
            let (tx, rx) = mpsc::sync_channel(256);
            receivers.push(rx.into_iter());
            handles.push(scope.spawn(move || {
                let mut scan = Scan::new(shard).expect("validated above");
                for item in scan.by_ref() {
                    if tx.send(item).is_err() {
                        break;
                    }
                }
                scan.summary()
            }));
        }
        for item in MergeByKey::new(receivers) {
            sink(item);
        }
        for handle in handles {
            let part = handle.join().expect("shard thread panicked");
            summary.absorb(&part);
        }
    });
    Ok(summary)
}

/// Canonical primes `p` with `norm(p) <= norm_bound` and `N(sigma(p)) = 2 N(p)`.
pub fn scan_norm_perfect_primes(norm_bound: u64) -> Result<Vec<GaussianInt>> {
    if norm_bound < 2 {
        return Err(GaussError::InvalidConfig("prime scan bound must be at least 2".into()));
    }
    if norm_bound > MAX_NORM_BOUND {
        return Err(GaussError::InvalidConfig(format!("norm bound must not exceed {MAX_NORM_BOUND}")));
    }
    let mut hits = Vec::new();
    for (norm, z) in CanonicalEnumerator::new(0, norm_bound) {
        if !is_gaussian_prime(&z) {
            continue;
        }
        let sigma = crate::divisor::sigma(&z)?;
        if sigma.norm() == num_bigint::BigUint::from(norm) * 2u32 {
            hits.push(z);
        }
    }
    Ok(hits)
}

/// Outcome of checking the odd-form theorem on every odd norm-perfect
/// canonical subject up to a bound.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TheoremVerification {
    pub bound: u64,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Tally of `k mod 4` over passing subjects; index 1 and 3 are the only
    /// reachable residues.
    #[serde(rename = "kModFour")]
    pub k_mod_four: [u64; 4],
    pub failures: Vec<ScanFailure>,
}

/// Checks the theorem, passing each examined item to `sink`.
pub fn verify_theorem_with(norm_bound: u64, mut sink: impl FnMut(&ScanItem)) -> Result<TheoremVerification> {
    let config = SearchConfig::new(norm_bound).with_parity(ParityFilter::Odd).with_kinds(KindFilter::BOTH);
    let mut outcome = TheoremVerification { bound: norm_bound, ..TheoremVerification::default() };
    for item in scan(config)? {
        outcome.checked += 1;
        match &item {
            ScanItem::Hit(record) => {
                let d = record.decomposition.as_ref().expect("odd hits carry a decomposition");
                outcome.passed += 1;
                outcome.k_mod_four[(d.k % 4) as usize] += 1;
            }
            ScanItem::Failure(f) => {
                outcome.failed += 1;
                outcome.failures.push(f.clone());
            }
        }
        sink(&item);
    }
    Ok(outcome)
}

pub fn verify_theorem(norm_bound: u64) -> Result<TheoremVerification> {
    verify_theorem_with(norm_bound, |_| {})
}
