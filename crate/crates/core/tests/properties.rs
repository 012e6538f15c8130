use std::collections::BTreeSet;

use gaussian_perfect::divisor::sigma_prime_power;
use gaussian_perfect::factorization::rational::is_prime_u64;
use gaussian_perfect::search::{scan, ScanItem, SearchConfig};
use gaussian_perfect::{
    classify, enumerate_canonical, factor, is_gaussian_prime, odd_form_decompose, sigma, split_prime, GaussianInt,
    KindFilter, ParityFilter, Unit,
};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn g(re: i64, im: i64) -> GaussianInt {
    GaussianInt::from_i64(re, im)
}

fn gaussian(range: i64) -> impl Strategy<Value = GaussianInt> {
    (-range..=range, -range..=range).prop_map(|(a, b)| g(a, b))
}

fn nonzero(range: i64) -> impl Strategy<Value = GaussianInt> {
    gaussian(range).prop_filter("nonzero", |z| !z.is_zero())
}

/// Primality by trial division over canonical Gaussian integers of smaller norm.
fn brute_is_prime(z: &GaussianInt) -> bool {
    let n = z.norm();
    if n <= BigUint::from(1u32) {
        return false;
    }
    let n = u64::try_from(&n).unwrap();
    let r = (n as f64).sqrt() as i64 + 1;
    for a in 1..=r {
        for b in 0..=r {
            let d = g(a, b);
            let dn = u64::try_from(&d.norm()).unwrap();
            if dn > 1 && dn < n && z.is_divisible_by(&d).unwrap() {
                return false;
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in gaussian(10_000), b in gaussian(10_000)) {
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn norm_parity_of_sums(terms in proptest::collection::vec(gaussian(1000), 0..12)) {
        let total: GaussianInt = terms.iter().cloned().sum();
        let odd_terms = terms.iter().filter(|z| z.norm().is_odd()).count();
        prop_assert_eq!(total.norm().is_odd(), odd_terms % 2 == 1);
    }

    #[test]
    fn canonical_associate_is_unique(z in nonzero(100_000)) {
        let (unit, c) = z.canonicalize().unwrap();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(unit.apply(&c), z.clone());
        let canonical: Vec<GaussianInt> = z.associates().unwrap().into_iter().filter(|a| a.is_canonical()).collect();
        prop_assert_eq!(canonical, vec![c]);
    }

    #[test]
    fn rounded_remainder_is_small(a in gaussian(1_000_000), b in nonzero(1000)) {
        let (q, r) = a.div_rem_rounded(&b).unwrap();
        prop_assert_eq!(&(&b * &q) + &r, a);
        prop_assert!(r.norm() * 2u32 <= b.norm());
    }

    #[test]
    fn gcd_is_greatest(a in gaussian(500), b in gaussian(500), d in nonzero(50)) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let da = &d * &a;
        let db = &d * &b;
        let h = da.gcd(&db).unwrap();
        prop_assert!(h.is_canonical());
        prop_assert!(da.is_divisible_by(&h).unwrap());
        prop_assert!(db.is_divisible_by(&h).unwrap());
        prop_assert!(h.is_divisible_by(&d).unwrap());
        let expected = (&d * &a.gcd(&b).unwrap()).canonicalize().unwrap().1;
        prop_assert_eq!(h, expected);
    }

    #[test]
    fn factorization_round_trips(z in nonzero(700)) {
        let f = factor(&z).unwrap();
        prop_assert_eq!(f.reconstruct(), z.clone());
        prop_assert_eq!(f.norm(), z.norm());
        let mut sorted = f.factors.clone();
        sorted.sort();
        prop_assert_eq!(&sorted, &f.factors);
        for (p, e) in &f.factors {
            prop_assert!(*e > 0 && p.is_canonical() && is_gaussian_prime(p));
        }
    }

    #[test]
    fn sigma_ignores_units(z in nonzero(300)) {
        let s = sigma(&z).unwrap();
        for unit in Unit::ALL {
            prop_assert_eq!(sigma(&unit.apply(&z)).unwrap(), s.clone());
        }
    }

    #[test]
    fn sigma_is_multiplicative_on_coprime_pairs(a in nonzero(30), b in nonzero(30)) {
        let a = a.canonicalize().unwrap().1;
        let b = b.canonicalize().unwrap().1;
        prop_assume!(a.gcd(&b).unwrap() == GaussianInt::one());
        prop_assume!(a.norm() * b.norm() <= BigUint::from(1_000_000u32));
        prop_assert_eq!(sigma(&(&a * &b)).unwrap(), sigma(&a).unwrap() * sigma(&b).unwrap());
    }
}

#[test]
fn gaussian_primality_matches_trial_division() {
    for a in -45i64..=45 {
        for b in -45i64..=45 {
            let z = g(a, b);
            if z.norm() > BigUint::from(2000u32) {
                continue;
            }
            assert_eq!(is_gaussian_prime(&z), brute_is_prime(&z), "{z}");
        }
    }
}

#[test]
fn split_primes_have_prime_norm() {
    for p in (5..10_000u64).filter(|&p| p % 4 == 1 && is_prime_u64(p)) {
        let pair = split_prime(&BigUint::from(p)).unwrap();
        assert_eq!(pair.len(), 2);
        for pi in &pair {
            assert_eq!(pi.norm(), BigUint::from(p));
            assert!(pi.is_canonical());
        }
        assert_eq!((&pair[0] * &pair[1]).canonicalize().unwrap().1, g(p as i64, 0));
    }
}

#[test]
fn rational_sigma_agrees_on_inert_products() {
    fn rational_sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }
    let inert = |n: u64| {
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                if p % 4 != 3 {
                    return false;
                }
                m /= p;
            } else {
                p += 1;
            }
        }
        true
    };
    // norm(n) = n^2 <= 10^4
    for n in (1..=100u64).filter(|&n| inert(n)) {
        assert_eq!(sigma(&g(n as i64, 0)).unwrap(), g(rational_sigma(n) as i64, 0), "{n}");
    }
}

#[test]
fn lemma_one_holds_per_prime() {
    for p in enumerate_canonical(500).filter(|p| !p.is_even() && is_gaussian_prime(p)) {
        for m in 1..=10 {
            assert_eq!(sigma_prime_power(&p, m).is_even(), m % 2 == 1, "({p})^{m}");
        }
    }
}

#[test]
fn enumeration_counts_match_lattice_points() {
    for bound in [1u64, 2, 3, 10, 99, 1000, 4321, 10_000] {
        let r = (bound as f64).sqrt() as i64 + 1;
        let brute = (1..=r)
            .flat_map(|a| (0..=r).map(move |b| (a, b)))
            .filter(|&(a, b)| ((a * a + b * b) as u64) <= bound)
            .count();
        let listed: Vec<GaussianInt> = enumerate_canonical(bound).collect();
        assert_eq!(listed.len(), brute, "bound {bound}");
        assert!(listed.windows(2).all(|w| w[0] < w[1]), "order at bound {bound}");
    }
}

#[test]
fn odd_records_have_norm_one_mod_four() {
    let config = SearchConfig::new(20_000).with_kinds(KindFilter::BOTH);
    let mut keys = Vec::new();
    for item in scan(config).unwrap() {
        let ScanItem::Hit(record) = item else { panic!("error record {item:?}") };
        assert!(record.subject.is_canonical());
        if !record.subject.is_even() {
            assert_eq!(record.norm % 4, 1);
            assert!(record.decomposition.is_some());
        } else {
            assert!(record.decomposition.is_none());
        }
        keys.push((record.norm, record.subject.clone()));
    }
    let unique: BTreeSet<_> = keys.iter().collect();
    assert_eq!(unique.len(), keys.len());
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn odd_norm_perfect_numbers_have_euler_form() {
    for z in enumerate_canonical(20_000) {
        if z.is_even() || !classify(&z).unwrap().is_norm_perfect {
            continue;
        }
        let d = odd_form_decompose(&z).unwrap();
        assert_eq!(d.k % 2, 1);
        assert_eq!(d.pi.gcd(&d.gamma).unwrap(), GaussianInt::one());
        assert_eq!(d.reconstruct(), z);
    }
}

#[test]
fn even_scan_partitions_all() {
    let all: Vec<ScanItem> = scan(SearchConfig::new(10_000)).unwrap().collect();
    let odd: Vec<ScanItem> = scan(SearchConfig::new(10_000).with_parity(ParityFilter::Odd)).unwrap().collect();
    let even: Vec<ScanItem> = scan(SearchConfig::new(10_000).with_parity(ParityFilter::Even)).unwrap().collect();
    assert_eq!(all.len(), odd.len() + even.len());
}
