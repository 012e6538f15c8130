//! Spira's sum-of-divisors function on `Z[i]` and the perfect-number
//! predicates built on it.
//!
//! `sigma` is multiplicative over the canonical factorization, with each
//! prime power contributing `1 + p + ... + p^k`. Because it only sees the
//! canonical primes, `sigma` is constant on associate classes, while the
//! perfect equation `sigma(z) = (1+i) z` is not.

use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{GaussError, Result};
use crate::factorization::{factor, is_gaussian_prime, CanonicalFactorization};
use crate::gaussian::{GaussianInt, Unit};

/// Default norm ceiling for [`sigma_oracle`].
pub const DEFAULT_ORACLE_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(z: &GaussianInt) -> Parity {
        if z.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Serializes a big natural number as a bare JSON number.
pub(crate) fn serialize_natural<S: Serializer>(n: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&n.to_string()).map_err(serde::ser::Error::custom)?.serialize(serializer)
}

/// `1 + p + p^2 + ... + p^k`.
pub fn sigma_prime_power(prime: &GaussianInt, k: u32) -> GaussianInt {
    let mut sum = GaussianInt::one();
    let mut power = GaussianInt::one();
    for _ in 0..k {
        power = &power * prime;
        sum = &sum + &power;
    }
    if cfg!(debug_assertions) {
        let closed = prime.pow(k + 1) - GaussianInt::one();
        let quotient = closed.exact_div(&(prime - &GaussianInt::one())).expect("p - 1 is nonzero for a prime p");
        debug_assert_eq!(quotient.as_ref(), Some(&sum), "geometric sum disagrees with closed form");
    }
    sum
}

/// `sigma` evaluated on an already computed factorization.
pub fn sigma_of_factorization(f: &CanonicalFactorization) -> GaussianInt {
    f.factors.iter().map(|(p, k)| sigma_prime_power(p, *k)).product()
}

/// Spira's sum-of-divisors function.
pub fn sigma(z: &GaussianInt) -> Result<GaussianInt> {
    if z.is_zero() {
        return Err(GaussError::ZeroInput("sigma"));
    }
    Ok(sigma_of_factorization(&factor(z)?))
}

/// Sums every divisor `prod(p_i^j_i)`, `0 <= j_i <= k_i`, by explicit
/// enumeration. Independent check on [`sigma`].
pub fn sigma_oracle(z: &GaussianInt, bound: u64) -> Result<GaussianInt> {
    if z.is_zero() {
        return Err(GaussError::ZeroInput("sigma_oracle"));
    }
    let norm = z.norm();
    if norm > BigUint::from(bound) {
        return Err(GaussError::OracleBoundExceeded { norm: norm.to_string(), bound });
    }
    let f = factor(z)?;
    let mut exponents = vec![0u32; f.factors.len()];
    let mut total = GaussianInt::zero();
    loop {
        let divisor: GaussianInt = f.factors.iter().zip(&exponents).map(|((p, _), &j)| p.pow(j)).product();
        total = total + divisor;
        // Mixed-radix increment over the exponent vector.
        let mut slot = 0;
        loop {
            if slot == exponents.len() {
                return Ok(total);
            }
            if exponents[slot] < f.factors[slot].1 {
                exponents[slot] += 1;
                break;
            }
            exponents[slot] = 0;
            slot += 1;
        }
    }
}

/// Whether `sigma(prime^m)` is even, for an odd canonical prime.
pub fn sigma_prime_power_is_even(prime: &GaussianInt, m: u32) -> Result<bool> {
    if !prime.is_canonical() || !is_gaussian_prime(prime) || prime.is_even() {
        return Err(GaussError::NotOddPrime(prime.to_string()));
    }
    Ok(sigma_prime_power(prime, m).is_even())
}

/// Everything there is to say about one Gaussian integer's perfection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerfectionReport {
    pub subject: GaussianInt,
    pub parity: Parity,
    pub sigma: GaussianInt,
    #[serde(rename = "normSigma", serialize_with = "serialize_natural")]
    pub norm_sigma: BigUint,
    #[serde(rename = "twoNorm", serialize_with = "serialize_natural")]
    pub two_norm: BigUint,
    #[serde(rename = "normPerfect")]
    pub is_norm_perfect: bool,
    /// The unit `e` for which `e * canonical(subject)` is perfect, if any.
    #[serde(rename = "perfectUnit")]
    pub perfect_associate: Option<Unit>,
}

impl PerfectionReport {
    pub fn is_perfect_class(&self) -> bool {
        self.perfect_associate.is_some()
    }
}

/// Classification of `z` together with its factorization, for callers that
/// need both.
pub fn classify_with_factorization(z: &GaussianInt) -> Result<(PerfectionReport, CanonicalFactorization)> {
    if z.is_zero() {
        return Err(GaussError::ZeroInput("classify"));
    }
    let f = factor(z)?;
    let sigma = sigma_of_factorization(&f);
    let norm_sigma = sigma.norm();
    let two_norm = z.norm() * 2u32;
    let is_norm_perfect = norm_sigma == two_norm;
    let (_, canonical) = z.canonicalize()?;
    let target = &GaussianInt::one_plus_i() * &canonical;
    // sigma is the same for every associate; only the right-hand side rotates.
    let perfect_associate = Unit::ALL.into_iter().find(|u| u.apply(&target) == sigma);
    debug_assert!(perfect_associate.is_none() || is_norm_perfect);
    let report = PerfectionReport {
        subject: z.clone(),
        parity: Parity::of(z),
        sigma,
        norm_sigma,
        two_norm,
        is_norm_perfect,
        perfect_associate,
    };
    Ok((report, f))
}

pub fn classify(z: &GaussianInt) -> Result<PerfectionReport> {
    classify_with_factorization(z).map(|(report, _)| report)
}

/// Witness `unit * pi^k * gamma^2` for an odd Gaussian integer with exactly
/// one prime to an odd power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddFormDecomposition {
    pub pi: GaussianInt,
    pub k: u32,
    pub gamma: GaussianInt,
    pub unit: Unit,
}

impl OddFormDecomposition {
    pub fn reconstruct(&self) -> GaussianInt {
        let gamma_sq = &self.gamma * &self.gamma;
        self.unit.apply(&(self.pi.pow(self.k) * gamma_sq))
    }
}

/// Splits an odd non-unit as `unit * pi^k * gamma^2`.
pub fn odd_form_decompose(z: &GaussianInt) -> Result<OddFormDecomposition> {
    if z.is_zero() {
        return Err(GaussError::ZeroInput("odd_form_decompose"));
    }
    odd_form_from_factorization(z, &factor(z)?)
}

pub fn odd_form_from_factorization(z: &GaussianInt, f: &CanonicalFactorization) -> Result<OddFormDecomposition> {
    if z.is_even() {
        return Err(GaussError::EvenInput(z.to_string()));
    }
    if f.is_unit() {
        return Err(GaussError::UnitInput(z.to_string()));
    }
    let odd: Vec<&(GaussianInt, u32)> = f.factors.iter().filter(|(_, e)| e % 2 == 1).collect();
    let [(pi, k)] = odd.as_slice() else {
        return Err(GaussError::NotEulerForm { subject: z.to_string(), odd_exponents: odd.len() });
    };
    let root: GaussianInt = f.factors.iter().filter(|(p, _)| p != pi).map(|(p, e)| p.pow(e / 2)).product();
    let (_, gamma) = root.canonicalize()?;
    let core = pi.pow(*k) * (&gamma * &gamma);
    let residue = z.exact_div(&core)?.expect("pi^k gamma^2 divides z");
    let unit = Unit::from_value(&residue).expect("quotient by every prime power is a unit");
    Ok(OddFormDecomposition { pi: pi.clone(), k: *k, gamma, unit })
}

/// Integer solutions of `(a-1)^2 + b^2 = 2`, the condition for a prime
/// `a+bi` to satisfy `N(a+bi+1) = 2 N(a+bi)`, and which of them are prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormPerfectPrimeSolutions {
    pub solutions: Vec<(i64, i64)>,
    pub primes: Vec<GaussianInt>,
}

/// Solves `(a-1)^2 + b^2 = 2` by exhausting the only possible range
/// `|a-1|, |b| <= 1` and keeps the prime solutions.
pub fn norm_perfect_prime_solutions() -> NormPerfectPrimeSolutions {
    let mut solutions = Vec::new();
    for a in 0..=2i64 {
        for b in -1..=1i64 {
            if (a - 1) * (a - 1) + b * b == 2 {
                solutions.push((a, b));
            }
        }
    }
    let primes = solutions.iter().map(|&(a, b)| GaussianInt::from_i64(a, b)).filter(is_gaussian_prime).collect();
    NormPerfectPrimeSolutions { solutions, primes }
}

/// `N(sigma(z))` without building a report.
pub fn norm_of_sigma(z: &GaussianInt) -> Result<BigUint> {
    Ok(sigma(z)?.norm())
}

/// True iff `N(sigma(z)) = 2 N(z)`.
pub fn is_norm_perfect(z: &GaussianInt) -> Result<bool> {
    Ok(norm_of_sigma(z)? == z.norm() * 2u32)
}

/// `k mod 4` of a decomposition, the residue left open for odd perfect numbers.
pub fn k_mod_four(d: &OddFormDecomposition) -> u32 {
    d.k % 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::from_i64(re, im)
    }

    fn rational_sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(&g(2, 1)).unwrap(), g(3, 1));
        assert_eq!(sigma(&g(1, 0)).unwrap(), g(1, 0));
        // 1 + (1+2i) + (1+2i)^2 = 1 + 1+2i + (-3+4i)
        assert_eq!(g(1, 2).pow(2), g(-3, 4));
        assert_eq!(sigma(&g(1, 2).pow(2)).unwrap(), g(-1, 6));
        assert_eq!(sigma(&GaussianInt::zero()), Err(GaussError::ZeroInput("sigma")));
    }

    #[test]
    fn oracle_values() {
        assert_eq!(sigma_oracle(&g(2, 1), 100).unwrap(), g(3, 1));
        assert_eq!(g(2, 2) * g(3, 1), g(4, 8));
        assert_eq!(sigma_oracle(&g(5, 0), 100).unwrap(), g(4, 8));
        assert_eq!(sigma(&g(5, 0)).unwrap(), g(4, 8));
        assert_eq!(sigma_oracle(&g(1, 0), 100).unwrap(), g(1, 0));
        assert_eq!(
            sigma_oracle(&g(10, 10), 100),
            Err(GaussError::OracleBoundExceeded { norm: "200".into(), bound: 100 })
        );
    }

    #[test]
    fn lemma_examples() {
        assert!(sigma_prime_power_is_even(&g(1, 2), 1).unwrap());
        assert_eq!(sigma_prime_power(&g(1, 2), 1), g(2, 2));
        assert!(!sigma_prime_power_is_even(&g(1, 2), 2).unwrap());
        assert_eq!(sigma_prime_power(&g(3, 0), 3), g(40, 0));
        assert!(sigma_prime_power_is_even(&g(3, 0), 3).unwrap());
        assert!(sigma_prime_power_is_even(&g(1, 1), 1).is_err());
        assert!(sigma_prime_power_is_even(&g(5, 0), 1).is_err());
        assert!(sigma_prime_power_is_even(&g(2, -1), 1).is_err());
    }

    #[test]
    fn classification() {
        let r = classify(&g(2, 1)).unwrap();
        assert!(r.is_norm_perfect);
        assert_eq!(r.norm_sigma, BigUint::from(10u32));
        assert_eq!(r.two_norm, BigUint::from(10u32));
        assert_eq!(r.parity, Parity::Odd);
        // (1+i) times each associate of 2+i: 1+3i, -3+i, -1-3i, 3-i; none is 3+i.
        let products: Vec<GaussianInt> = g(2, 1).associates().unwrap().iter().map(|a| g(1, 1) * a.clone()).collect();
        assert_eq!(products, vec![g(1, 3), g(-3, 1), g(-1, -3), g(3, -1)]);
        assert_eq!(r.perfect_associate, None);

        let one = classify(&g(1, 0)).unwrap();
        assert!(!one.is_norm_perfect);
        let three = classify(&g(3, 0)).unwrap();
        assert_eq!(three.sigma, g(4, 0));
        assert_eq!(three.norm_sigma, BigUint::from(16u32));
        assert!(!three.is_norm_perfect);
        assert!(classify(&GaussianInt::zero()).is_err());
    }

    #[test]
    fn report_json_field_names() {
        let json = serde_json::to_string(&classify(&g(2, 1)).unwrap()).unwrap();
        assert_eq!(
            json,
            r#"{"subject":"2+i","parity":"odd","sigma":"3+i","normSigma":10,"twoNorm":10,"normPerfect":true,"perfectUnit":null}"#
        );
    }

    #[test]
    fn perfect_unit_implies_norm_perfect() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                let z = g(a, b);
                if z.is_zero() {
                    continue;
                }
                let r = classify(&z).unwrap();
                assert_eq!(r.is_norm_perfect, r.norm_sigma == r.two_norm);
                if let Some(u) = r.perfect_associate {
                    let assoc = u.apply(&z.canonicalize().unwrap().1);
                    assert_eq!(sigma(&assoc).unwrap(), g(1, 1) * assoc);
                    assert!(r.is_norm_perfect);
                }
            }
        }
    }

    #[test]
    fn decompositions() {
        let d = odd_form_decompose(&g(2, 1)).unwrap();
        assert_eq!(d, OddFormDecomposition { pi: g(2, 1), k: 1, gamma: g(1, 0), unit: Unit::One });

        let z = g(2, 1).pow(3) * g(1, 2).pow(2);
        let d = odd_form_decompose(&z).unwrap();
        assert_eq!(d, OddFormDecomposition { pi: g(2, 1), k: 3, gamma: g(1, 2), unit: Unit::One });
        assert_eq!(d.reconstruct(), z);
        assert_eq!(k_mod_four(&d), 3);

        assert_eq!(
            odd_form_decompose(&g(5, 0)),
            Err(GaussError::NotEulerForm { subject: "5".into(), odd_exponents: 2 })
        );
        assert_eq!(
            odd_form_decompose(&g(9, 0)),
            Err(GaussError::NotEulerForm { subject: "9".into(), odd_exponents: 0 })
        );
        assert_eq!(odd_form_decompose(&g(1, 1)), Err(GaussError::EvenInput("1+i".into())));
        assert_eq!(odd_form_decompose(&g(0, -1)), Err(GaussError::UnitInput("-i".into())));
    }

    #[test]
    fn decomposition_unit_absorbs_non_canonical_gamma() {
        // gamma = (1+2i)(2+i) = 5i is not canonical; the unit must compensate.
        let z = Unit::I.apply(&(g(3, 0).pow(5) * g(1, 2).pow(2) * g(2, 1).pow(2)));
        let d = odd_form_decompose(&z).unwrap();
        assert_eq!(d.pi, g(3, 0));
        assert_eq!(d.k, 5);
        assert_eq!(d.gamma, g(5, 0));
        assert_eq!(d.reconstruct(), z);
        assert_eq!(d.pi.gcd(&d.gamma).unwrap(), g(1, 0));
    }

    #[test]
    fn raw_norm_perfect_prime_equation() {
        let s = norm_perfect_prime_solutions();
        assert_eq!(s.solutions, vec![(0, -1), (0, 1), (2, -1), (2, 1)]);
        assert_eq!(s.primes, vec![g(2, -1), g(2, 1)]);
        assert!(!is_gaussian_prime(&g(0, 1)));
    }

    #[test]
    fn rational_primes_three_mod_four_agree_with_rational_sigma() {
        assert_eq!(rational_sigma(27), 40);
        for n in [3u64, 7, 9, 11, 21, 49, 63, 77, 99] {
            assert_eq!(sigma(&g(n as i64, 0)).unwrap(), g(rational_sigma(n) as i64, 0), "{n}");
        }
    }

    #[test]
    fn norm_perfect_helpers() {
        assert!(is_norm_perfect(&g(2, 1)).unwrap());
        assert!(!is_norm_perfect(&g(1, 2)).unwrap());
        assert_eq!(norm_of_sigma(&g(1, 2)).unwrap(), BigUint::from(8u32));
        assert!(One::is_one(&norm_of_sigma(&g(0, 1)).unwrap()));
        assert_eq!(norm_of_sigma(&g(3, 0)).unwrap().to_u64(), Some(16));
    }
}
