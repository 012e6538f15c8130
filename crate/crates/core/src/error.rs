use thiserror::Error;

/// Errors raised by Gaussian-integer operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("{0}: argument must be nonzero")]
    ZeroInput(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd(0, 0) is undefined")]
    BothZero,

    #[error("invalid Gaussian integer literal `{0}`")]
    Parse(String),

    #[error("{0} is not a rational prime")]
    NotPrime(String),

    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(String),

    #[error("{0} is not an odd canonical Gaussian prime")]
    NotOddPrime(String),

    #[error("{0} is even")]
    EvenInput(String),

    #[error("{0} is a unit")]
    UnitInput(String),

    #[error("not of Euler form: {odd_exponents} primes carry an odd exponent in {subject}")]
    NotEulerForm { subject: String, odd_exponents: usize },

    #[error("norm {norm} exceeds the oracle bound {bound}")]
    OracleBoundExceeded { norm: String, bound: u64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = GaussError> = std::result::Result<T, E>;
