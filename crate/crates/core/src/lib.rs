//! Exact arithmetic, canonical factorization and Spira's sum-of-divisors
//! function on the Gaussian integers, with an exhaustive search engine for
//! norm-perfect and perfect Gaussian integers.

pub mod cli;
pub mod divisor;
pub mod error;
pub mod factorization;
pub mod gaussian;
pub mod search;

pub use divisor::{
    classify, norm_perfect_prime_solutions, odd_form_decompose, sigma, sigma_oracle, sigma_prime_power_is_even,
    OddFormDecomposition, Parity, PerfectionReport,
};
pub use error::{GaussError, Result};
pub use factorization::{
    factor, factor_rational, is_gaussian_prime, split_prime, sqrt_minus_one_mod_p, CanonicalFactorization,
};
pub use gaussian::{GaussianInt, Unit};
pub use search::{
    enumerate_canonical, scan, scan_norm_perfect_primes, scan_sharded, verify_theorem, KindFilter, ParityFilter,
    RecordKind, ScanItem, SearchConfig, SearchRecord, TheoremVerification,
};
