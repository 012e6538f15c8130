//! Canonical prime factorization in `Z[i]`.
//!
//! A nonzero `z` is written `unit * prod(prime^exponent)` with every prime in
//! the first quadrant, sorted by `(norm, re, im)`. The algorithm factors
//! `norm(z)` over `Z`, lifts each rational prime to its Gaussian primes, and
//! strips them off `z` by exact division; whatever is left is the unit.

pub mod rational;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{GaussError, Result};
use crate::gaussian::{GaussianInt, Unit};

pub use rational::{factor_rational, is_rational_prime, sqrt_minus_one_mod_p, DEFAULT_SEED};

/// `unit * prod(prime^exponent)`, primes canonical and sorted by `(norm, re, im)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalFactorization {
    pub unit: Unit,
    pub factors: Vec<(GaussianInt, u32)>,
}

impl CanonicalFactorization {
    /// Multiplies the factorization back out.
    pub fn reconstruct(&self) -> GaussianInt {
        let product: GaussianInt = self.factors.iter().map(|(p, e)| p.pow(*e)).product();
        self.unit.apply(&product)
    }

    pub fn norm(&self) -> BigUint {
        self.factors.iter().map(|(p, e)| p.norm().pow(*e)).product()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for CanonicalFactorization {
    /// `unit * (p1)^e1 * (p2)^e2 ...`; a bare unit has no factor terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, e) in &self.factors {
            write!(f, " * ({p})^{e}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct FactorEntry<'a> {
    prime: &'a GaussianInt,
    exponent: u32,
}

impl Serialize for CanonicalFactorization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CanonicalFactorization", 2)?;
        s.serialize_field("unit", &self.unit)?;
        let factors: Vec<FactorEntry<'_>> =
            self.factors.iter().map(|(prime, exponent)| FactorEntry { prime, exponent: *exponent }).collect();
        s.serialize_field("factors", &factors)?;
        s.end()
    }
}

/// The canonical Gaussian primes lying above the rational prime `p`.
///
/// `2` ramifies to `1+i`; `p = 3 mod 4` stays inert; `p = 1 mod 4` splits
/// into two non-associate conjugate primes, returned sorted.
pub fn split_prime(p: &BigUint) -> Result<Vec<GaussianInt>> {
    split_prime_seeded(p, DEFAULT_SEED)
}

pub fn split_prime_seeded(p: &BigUint, seed: u64) -> Result<Vec<GaussianInt>> {
    if !is_rational_prime(p) {
        return Err(GaussError::NotPrime(p.to_string()));
    }
    let residue = (p % 4u32).to_u32().expect("residue mod 4");
    match residue {
        2 => Ok(vec![GaussianInt::one_plus_i()]),
        3 => Ok(vec![GaussianInt::from(p.clone())]),
        _ => {
            let x = sqrt_minus_one_mod_p(p, seed)?;
            let lifted = GaussianInt::new(num_bigint::BigInt::from(x), 1);
            let pi = GaussianInt::from(p.clone()).gcd(&lifted)?;
            let (_, partner) = pi.conj().canonicalize()?;
            let mut pair = vec![pi, partner];
            pair.sort();
            Ok(pair)
        }
    }
}

/// Strips `prime` from `rest` as many times as it divides.
fn strip(rest: &mut GaussianInt, prime: &GaussianInt) -> u32 {
    let mut e = 0;
    while let Some(q) = rest.exact_div(prime).expect("prime is nonzero") {
        *rest = q;
        e += 1;
    }
    e
}

/// Canonical factorization of a nonzero Gaussian integer.
pub fn factor(z: &GaussianInt) -> Result<CanonicalFactorization> {
    if z.is_zero() {
        return Err(GaussError::ZeroInput("factor"));
    }
    let mut rest = z.clone();
    let mut factors = Vec::new();
    for (p, _) in factor_rational(&z.norm())? {
        for prime in split_prime(&p)? {
            let e = strip(&mut rest, &prime);
            if e > 0 {
                factors.push((prime, e));
            }
        }
    }
    let unit = Unit::from_value(&rest).expect("residue after stripping every prime is a unit");
    factors.sort();
    Ok(CanonicalFactorization { unit, factors })
}

/// True iff `z` is a unit multiple of a Gaussian prime.
pub fn is_gaussian_prime(z: &GaussianInt) -> bool {
    if z.is_zero() {
        return false;
    }
    if z.re.is_zero() || z.im.is_zero() {
        // Associate of a rational integer: prime iff that integer is a prime 3 mod 4.
        let magnitude = if z.re.is_zero() { z.im.abs() } else { z.re.abs() };
        let magnitude = magnitude.to_biguint().expect("absolute value");
        return (&magnitude % 4u32) == BigUint::from(3u32) && is_rational_prime(&magnitude);
    }
    is_rational_prime(&z.norm())
}

/// Exponent of the prime above 2 in `z`: the number of times `1+i` divides it.
pub fn two_adic_valuation(z: &GaussianInt) -> Option<u32> {
    if z.is_zero() {
        return None;
    }
    let mut rest = z.clone();
    Some(strip(&mut rest, &GaussianInt::one_plus_i()))
}
