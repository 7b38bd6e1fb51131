//! Continued fraction, approximation pairs and certified transcendental
//! comparisons.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use paradox_core::bounds::{floor_log_ratio, harmonic_cap_holds, smallest_j_with_harmonic_cap};
use paradox_core::numtheory::{approx_pairs, convergents, partial_quotients, rhin_gap_ok, Side};
use paradox_core::real::log3_of_2;

#[test]
fn convergents_follow_the_recurrence_and_approximate() {
    let cs = convergents(40).unwrap();
    let a = partial_quotients(40).unwrap();
    for k in 2..cs.len() {
        assert_eq!(cs[k].p, &a[k] * &cs[k - 1].p + &cs[k - 2].p);
        assert_eq!(cs[k].q, &a[k] * &cs[k - 1].q + &cs[k - 2].q);
    }
    let x = log3_of_2(4096);
    for c in &cs[1..] {
        let p = BigInt::from(c.p.clone());
        let q = BigInt::from(c.q.clone());
        let approx = BigRational::new(p, q.clone());
        let bound = BigRational::new(BigInt::one(), &q * &q);
        assert!((x.upper() - &approx) < bound && (&approx - x.lower()) < bound, "{}", c.index);
        match c.side {
            Side::Below => assert!(approx < x.lower()),
            Side::Above => assert!(approx > x.upper()),
        }
    }
}

#[test]
fn approximation_pairs_exceed_their_exponent() {
    for eps in [BigRational::new(1.into(), 4.into()), BigRational::new(1.into(), 1000.into())] {
        for p in approx_pairs(&eps, 5).unwrap() {
            assert!(p.b >= p.a + 1);
            assert!(p.satisfies(&eps).unwrap());
        }
    }
}

#[test]
fn gap_bound_on_census_pairs_and_convergents() {
    for (j, q) in [(8, 5), (27, 17), (46, 29), (54, 34), (65, 41), (73, 46), (92, 58), (16, 10), (130, 82)] {
        assert!(rhin_gap_ok(j, q).unwrap(), "({j}, {q})");
    }
    // convergents are the hardest cases for the gap
    for c in convergents(12).unwrap().iter().skip(3) {
        let (q, j) = (c.p.to_u64().unwrap(), c.q.to_u64().unwrap());
        assert!(rhin_gap_ok(j, q).unwrap());
    }
}

#[test]
fn harmonic_scan_for_the_larger_threshold() {
    let m1 = BigUint::from(23_035_537_407u64);
    let j1 = smallest_j_with_harmonic_cap(&m1, 2, 400_000).unwrap();
    assert_eq!(j1, Some(301_994));
    assert_eq!(floor_log_ratio(301_994), 190_537);
    assert!(harmonic_cap_holds(301_994, &m1).unwrap());
    assert!(!harmonic_cap_holds(301_993, &m1).unwrap());
}
