//! Extremal and mean remainders against exhaustive enumeration, and the
//! bounds every paradoxical sequence must satisfy.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use paradox_core::bounds::{
    en_ratio_bounds, floor_log_ratio, harmonic_cap_holds, mean_remainder_check, ones_ratio_window, remainder_bounds,
};
use paradox_core::dynamics::{parity_vector_u64, shortcut_remainder_u128, trajectory};
use paradox_core::poset::check_remainder_monotonicity;
use paradox_core::search::enumerate_paradoxes;
use paradox_core::{Dyadic, Formalism, Natural};
use proptest::prelude::*;

#[test]
fn remainder_bounds_are_tight_on_their_classes() {
    for j in 1..=14u64 {
        let modulus = 1u64 << j;
        let bounds: Vec<_> = (0..=j).map(|q| remainder_bounds(j, q).unwrap()).collect();
        for n in 1..=modulus {
            let q = parity_vector_u64(n, j as usize).unwrap().ones() as u64;
            let e = Dyadic::new(BigInt::from(shortcut_remainder_u128(n, j as u32).unwrap()), j);
            let b = &bounds[q as usize];
            assert!(b.lower <= e && e <= b.upper, "j={j} n={n}");
            let residue = BigUint::from(n % modulus);
            assert_eq!(e == b.lower, residue == b.lower_class, "lower j={j} n={n}");
            assert_eq!(e == b.upper, residue == b.upper_class, "upper j={j} n={n}");
        }
        for b in &bounds {
            assert!(b.lower <= b.upper);
            assert_eq!(b.lower == b.upper, b.q == 0 || b.q == j);
        }
    }
}

#[test]
fn mean_remainder_is_a_quarter_of_the_length() {
    for j in 1..=18u32 {
        assert_eq!(mean_remainder_check(j).unwrap(), BigRational::new(BigInt::from(j), BigInt::from(4)), "j={j}");
    }
}

#[test]
fn remainders_decrease_along_the_order() {
    for j in 1..=10 {
        assert!(check_remainder_monotonicity(j).unwrap().is_empty(), "j={j}");
    }
}

#[test]
fn floor_log_ratio_matches_a_decimal_expansion() {
    // log 2 / log 3 to 70 digits
    let digits = "6309297535714574370995271143427608542995856401318804278706549438386852";
    let scale = BigInt::from(10u32).pow(digits.len() as u32);
    let x = BigInt::parse_bytes(digits.as_bytes(), 10).unwrap();
    let oracle = |j: u64| u64::try_from((&x * j) / &scale).unwrap();
    for j in (1..=20_000u64).chain((20_001..=1_000_000).step_by(9973)) {
        assert_eq!(floor_log_ratio(j), oracle(j), "j={j}");
    }
}

proptest! {
    #[test]
    fn harmonic_cap_is_monotone(j in 2u64..400, m in 1u64..1_000_000, k in 1u64..1000) {
        let smaller = m.saturating_sub(k).max(1);
        if harmonic_cap_holds(j, &BigUint::from(m)).unwrap() {
            prop_assert!(harmonic_cap_holds(j, &BigUint::from(smaller)).unwrap());
        }
    }

    #[test]
    fn upper_ratio_bound_holds_for_any_sequence(n in 1u64..1_000_000, j in 1usize..200, classic in any::<bool>()) {
        let f = if classic { Formalism::Classic } else { Formalism::Shortcut };
        let t = trajectory(&Natural::from(n), j, f).unwrap();
        if let Ok(r) = en_ratio_bounds(&t) {
            prop_assert!(r.upper_holds);
        }
    }
}

#[test]
fn paradoxes_satisfy_all_bounds() {
    for f in [Formalism::Shortcut, Formalism::Classic] {
        let hits = enumerate_paradoxes(&Natural::from(3u32), &Natural::from(10_000u32), f, 100_000).unwrap();
        assert!(!hits.is_empty());
        for h in &hits {
            let t = trajectory(&h.n, h.j as usize, f).unwrap();
            let r = en_ratio_bounds(&t).unwrap();
            assert!(r.lower_holds && r.upper_holds);
            assert!(ones_ratio_window(&t).unwrap());
            if f == Formalism::Shortcut {
                assert_eq!(h.q, floor_log_ratio(h.j));
            }
        }
    }
}
