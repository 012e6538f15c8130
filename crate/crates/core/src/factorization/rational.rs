//! Rational-integer substrate: primality, factorization, and square roots
//! of -1 modulo primes `p = 1 mod 4`.
//!
//! Factorization is trial division up to [`TRIAL_LIMIT`], then Miller-Rabin
//! plus Brent's variant of Pollard rho for any cofactor left over.

use num_bigint::{BigRng010, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{GaussError, Result};

/// Trial division covers every prime factor up to this bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Seed used when callers don't supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_1961;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twenty prime bases. Exact below 3.3e24,
/// probabilistic above.
pub fn is_rational_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    const BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    'witness: for a in BASES {
        let a = BigUint::from(a);
        if (&a % n).is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    match factors.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += e,
        None => factors.push((p, e)),
    }
}

/// Brent's cycle-finding variant of Pollard rho. Returns a nontrivial factor
/// of the odd composite `n`.
fn pollard_rho(n: &BigUint, rng: &mut StdRng) -> BigUint {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    loop {
        let c = rng.random_biguint_range(&one, n);
        let mut y = rng.random_biguint_range(&two, n);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut g = one.clone();
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            // The batch overshot; walk one step at a time from the saved point.
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
}

fn split_large(n: BigUint, rng: &mut StdRng, factors: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_rational_prime(&n) {
        push_factor(factors, n, 1);
        return;
    }
    let d = pollard_rho(&n, rng);
    let rest = &n / &d;
    split_large(d, rng, factors);
    split_large(rest, rng, factors);
}

/// Prime factorization of `n >= 1` over `Z`, primes ascending.
pub fn factor_rational(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(GaussError::ZeroInput("factor_rational"));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small).into_iter().map(|(p, e)| (BigUint::from(p), e)).collect());
    }
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let big_p = BigUint::from(p);
        if &big_p * &big_p > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&big_p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((big_p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        if p > TRIAL_LIMIT {
            let mut rng = StdRng::seed_from_u64(DEFAULT_SEED);
            split_large(rest, &mut rng, &mut factors);
        } else {
            factors.push((rest, 1));
        }
    }
    factors.sort();
    Ok(factors)
}

/// Fixed-width factorization for `n` fitting in 64 bits.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor_u64 requires n >= 1");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if p * p > rest {
            factors.push((rest, 1));
        } else {
            let mut big = Vec::new();
            let mut rng = StdRng::seed_from_u64(DEFAULT_SEED);
            split_large(BigUint::from(rest), &mut rng, &mut big);
            factors.extend(big.into_iter().map(|(q, e)| (q.to_u64().expect("divides a u64"), e)));
        }
    }
    factors.sort_unstable();
    factors
}

/// The smaller square root of -1 modulo the prime `p = 1 mod 4`.
///
/// Draws `c` at random from a generator seeded with `seed` and returns
/// `c^((p-1)/4)` once it squares to -1; a quadratic non-residue always does.
pub fn sqrt_minus_one_mod_p(p: &BigUint, seed: u64) -> Result<BigUint> {
    if !is_rational_prime(p) {
        return Err(GaussError::NotPrime(p.to_string()));
    }
    if (p % 4u32) != BigUint::one() {
        return Err(GaussError::NotOneModFour(p.to_string()));
    }
    let minus_one = p - 1u32;
    let quarter = &minus_one >> 2usize;
    let two = BigUint::from(2u32);
    if *p == BigUint::from(5u32) {
        return Ok(two);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let c = rng.random_biguint_range(&two, &minus_one);
        let x = c.modpow(&quarter, p);
        if (&x * &x) % p == minus_one {
            let other = p - &x;
            return Ok(x.min(other));
        }
    }
}
