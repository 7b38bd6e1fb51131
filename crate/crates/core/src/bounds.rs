//! Extremal and average remainders, the paradox criterion, and the bounds a
//! paradoxical sequence must satisfy: the `E/n` sandwich, the ones-ratio
//! window and the harmonic-mean cap.
//!
//! Every decision here is an integer comparison. Logarithms only appear in
//! [`smallest_j_with_harmonic_cap`] and [`harmonic_exponent_ceiling`], where a
//! certified interval pre-filters candidates before the exact test.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{pow2, pow3, Dyadic};
use crate::dynamics::{shortcut_remainder_u128, trajectory, Formalism, Natural, Trajectory};
use crate::real::{self, Interval};
use crate::{Error, Result};

/// `(3^q - 2^q) / 2^j <= E_j(n) <= (3^q - 2^q) / 2^q` for every `n` whose
/// parity vector of length `j` has `q` ones, with the residue classes modulo
/// `2^j` on which each bound is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderBounds {
    pub j: u64,
    pub q: u64,
    pub lower: Dyadic,
    pub upper: Dyadic,
    /// `(2/3)^q - 1 mod 2^j`: odd steps first, then halvings.
    pub lower_class: BigUint,
    /// `-2^(j-q) mod 2^j`: halvings first, then odd steps.
    pub upper_class: BigUint,
}

/// Inverse of an odd `a` modulo `2^bits`, by Newton iteration.
pub fn inverse_mod_pow2(a: &BigUint, bits: u64) -> BigUint {
    assert!(a.is_odd(), "only odd numbers are invertible modulo a power of two");
    let modulus = pow2(bits);
    let a = a % &modulus;
    let two = BigUint::from(2u32);
    let mut inv = BigUint::one();
    let mut precision = 1u64;
    while precision < bits {
        precision *= 2;
        // inv <- inv * (2 - a * inv), computed as inv * (2 + M - a * inv mod M)
        let prod = (&a * &inv) % &modulus;
        let factor = (&two + &modulus - prod) % &modulus;
        inv = (inv * factor) % &modulus;
    }
    inv % modulus
}

pub fn remainder_bounds(j: u64, q: u64) -> Result<RemainderBounds> {
    if q > j {
        return Err(Error::OnesExceedLength { j, q });
    }
    let modulus = pow2(j);
    if q == 0 {
        return Ok(RemainderBounds {
            j,
            q,
            lower: Dyadic::zero(),
            upper: Dyadic::zero(),
            lower_class: BigUint::zero(),
            upper_class: BigUint::zero(),
        });
    }
    let spread = BigInt::from(pow3(q)) - BigInt::from(pow2(q));
    let lower = Dyadic::new(spread.clone(), j);
    let upper = Dyadic::new(spread, q);
    let two_q = pow2(q) % &modulus;
    let lower_class = (two_q * inverse_mod_pow2(&pow3(q), j) + &modulus - 1u32) % &modulus;
    let upper_class = (&modulus - pow2(j - q) % &modulus) % &modulus;
    Ok(RemainderBounds { j, q, lower, upper, lower_class, upper_class })
}

/// Mean of `E_j(n)` over `n = 1..=2^j`.
pub fn mean_remainder_check(j: u32) -> Result<BigRational> {
    const CAP: u32 = 22;
    if j > CAP {
        return Err(Error::CapExceeded { j: j as u64, cap: CAP as u64 });
    }
    let mut sum: u128 = 0;
    for n in 1..=(1u64 << j) {
        sum += shortcut_remainder_u128(n, j).expect("residues below 2^22 never overflow");
    }
    Ok(BigRational::new(BigInt::from(sum), BigInt::one() << (2 * j)))
}

/// Outcome of testing a sequence against the paradox definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParadoxCheck {
    pub paradoxical: bool,
    pub coefficient_below_one: bool,
    pub coefficient: Dyadic,
    pub remainder: Dyadic,
    /// Last term minus first term.
    pub difference: BigInt,
}

/// `C < 1` and last term `>=` first term.
pub fn is_paradoxical(t: &Trajectory) -> ParadoxCheck {
    let form = t.final_form();
    let below = form.coefficient_below_one();
    let difference = BigInt::from(t.last().clone()) - BigInt::from(t.start.clone());
    ParadoxCheck {
        paradoxical: below && !difference.is_negative(),
        coefficient_below_one: below,
        coefficient: form.coefficient(),
        remainder: form.remainder.clone(),
        difference,
    }
}

/// Odd terms of a sequence through their count, reciprocal sum and harmonic
/// mean `h = q / sum(1/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicData {
    pub q: u64,
    pub sum_reciprocals: BigRational,
    pub h: BigRational,
}

pub fn harmonic_data(t: &Trajectory) -> Result<HarmonicData> {
    let mut q = 0u64;
    let mut sum = BigRational::zero();
    for m in t.odd_terms() {
        q += 1;
        sum += BigRational::new(BigInt::one(), BigInt::from(m.clone()));
    }
    if q == 0 {
        return Err(Error::NoOddTerms);
    }
    let h = BigRational::from_integer(BigInt::from(q)) / &sum;
    Ok(HarmonicData { q, sum_reciprocals: sum, h })
}

/// `(2^e - 3^q)/2^e <= E/n <= ((3 + 1/h)^q - 3^q)/2^e`, evaluated exactly.
///
/// The upper bound holds for every sequence; the lower bound is equivalent to
/// the last term being at least the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnRatio {
    pub lower: BigRational,
    pub ratio: BigRational,
    pub upper: BigRational,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn en_ratio_bounds(t: &Trajectory) -> Result<EnRatio> {
    let data = harmonic_data(t)?;
    let form = t.final_form();
    let den = BigInt::one() << form.e;
    let three_q = BigInt::from(pow3(form.q));
    let lower = BigRational::new(&den - &three_q, den.clone());
    let ratio = form.remainder.to_rational() / BigRational::from_integer(BigInt::from(t.start.clone()));
    let inverse_h = data.sum_reciprocals / BigRational::from_integer(BigInt::from(data.q));
    let base = BigRational::from_integer(BigInt::from(3)) + inverse_h;
    let grown = num_traits::pow::pow(base, form.q as usize);
    let upper = (grown - BigRational::from_integer(three_q)) / BigRational::from_integer(den);
    Ok(EnRatio {
        lower_holds: ratio >= lower,
        upper_holds: ratio <= upper,
        lower,
        ratio,
        upper,
    })
}

/// `log 2 / log(3 + 1/h) <= q/e < log 2 / log 3`, as
/// `2^e * num^q <= (3 num + den)^q` and `3^q < 2^e` with `h = num/den`.
pub fn ones_ratio_window(t: &Trajectory) -> Result<bool> {
    let data = harmonic_data(t)?;
    let form = t.final_form();
    let num = data.h.numer().magnitude().clone();
    let den = data.h.denom().magnitude().clone();
    let q = form.q as usize;
    let left = (num_traits::pow::pow(num.clone(), q) << form.e) <= num_traits::pow::pow(num * 3u32 + den, q);
    Ok(left && form.coefficient_below_one())
}

/// `floor(j log 2 / log 3)`, the largest `q` with `3^q <= 2^j`.
pub fn floor_log_ratio(j: u64) -> u64 {
    // 15601/24727 is a convergent of log 2 / log 3, off by < 2e-9; the
    // correction loops settle the exact value.
    let mut q = (j as u128 * 15601 / 24727) as u64;
    while q > 0 && !power_of_three_fits(q, j) {
        q -= 1;
    }
    while power_of_three_fits(q + 1, j) {
        q += 1;
    }
    q
}

/// `3^q <= 2^j`; equality is impossible for `q >= 1`, so this compares bit
/// lengths.
fn power_of_three_fits(q: u64, j: u64) -> bool {
    q == 0 || pow3(q).bits() <= j
}

/// Whether a paradoxical sequence of length `j` could have harmonic mean of
/// odd terms at least `m`: `2^j m^q <= (3m + 1)^q` with `q = floor_log_ratio(j)`.
pub fn harmonic_cap_holds(j: u64, m: &BigUint) -> Result<bool> {
    let q = floor_log_ratio(j);
    if q == 0 {
        return Err(Error::InvalidParameter(alloc::format!("length {j} admits no odd step below coefficient one")));
    }
    Ok(cap_exact(j, q, m))
}

fn cap_exact(j: u64, q: u64, m: &BigUint) -> bool {
    let q = q as usize;
    (num_traits::pow::pow(m.clone(), q) << j) <= num_traits::pow::pow(m * 3u32 + 1u32, q)
}

/// Certified enclosures shared by the harmonic scans.
struct CapOracle {
    log3_of_2: Interval,
    ln2: Interval,
    growth: Interval,
}

impl CapOracle {
    fn new(m: &BigUint, prec: u32) -> Self {
        CapOracle {
            log3_of_2: real::log3_of_2(prec),
            ln2: real::ln2(prec),
            growth: real::ln_ratio(&(m * 3u32 + 1u32), m, prec),
        }
    }

    fn floor_log_ratio(&self, j: u64) -> u64 {
        match self.log3_of_2.mul_int(&BigInt::from(j)).floor() {
            Some(q) => u64::try_from(q).expect("q is below j"),
            None => floor_log_ratio(j),
        }
    }

    /// Sign of `q ln(3 + 1/m) - j ln 2`, if certified.
    fn cap_sign(&self, j: u64, q: u64) -> Option<Ordering> {
        self.growth.mul_int(&BigInt::from(q)).sub(&self.ln2.mul_int(&BigInt::from(j))).sign()
    }
}

/// Smallest `j` in `from..=limit` for which [`harmonic_cap_holds`] is true.
///
/// Candidates are screened with certified intervals; undecided ones and the
/// answer itself are settled exactly.
pub fn smallest_j_with_harmonic_cap(m: &BigUint, from: u64, limit: u64) -> Result<Option<u64>> {
    if m.is_zero() {
        return Err(Error::InvalidParameter("harmonic threshold must be positive".into()));
    }
    let oracle = CapOracle::new(m, 192);
    for j in from.max(2)..=limit {
        let q = oracle.floor_log_ratio(j);
        if q == 0 {
            continue;
        }
        let holds = match oracle.cap_sign(j, q) {
            Some(Ordering::Less) => false,
            Some(_) => true,
            None => cap_exact(j, q, m),
        };
        if holds {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Smallest `q` with `(3m + 1)^q >= 2^j m^q`, i.e. `ceil(j log 2 / log(3 + 1/m))`.
pub fn harmonic_exponent_ceiling(j: u64, m: &BigUint) -> Result<u64> {
    if m.is_zero() {
        return Err(Error::InvalidParameter("harmonic threshold must be positive".into()));
    }
    let fits = |q: u64| cap_exact(j, q, m);
    // estimate from j ln2 / ln(3 + 1/m), then walk to the exact boundary
    let oracle = CapOracle::new(m, 128);
    let estimate = oracle
        .ln2
        .mul_int(&BigInt::from(j))
        .div(&oracle.growth)
        .and_then(|x| x.floor())
        .and_then(|x| u64::try_from(x).ok())
        .unwrap_or(0);
    let mut q = estimate;
    while q > 0 && fits(q - 1) {
        q -= 1;
    }
    while !fits(q) {
        q += 1;
    }
    Ok(q)
}

/// All `n` for which the length-`j` sequence from `n` is paradoxical, for the
/// lengths where the harmonic cap settles the question.
///
/// If even `h >= 1` is impossible there is no solution. If `h >= 3` is
/// impossible, some odd term is 1, the sequence is trapped in `1, 2` and only
/// `n <= 2` remain, which are checked directly. Other lengths are rejected.
pub fn small_j_classification(j: u64) -> Result<Vec<Natural>> {
    if j < 2 {
        return Err(Error::UnsupportedLength(j));
    }
    if !harmonic_cap_holds(j, &BigUint::one())? {
        return Ok(Vec::new());
    }
    if harmonic_cap_holds(j, &BigUint::from(3u32))? {
        return Err(Error::UnsupportedLength(j));
    }
    let mut found = Vec::new();
    for n in [1u32, 2] {
        let n = Natural::from(n);
        let t = trajectory(&n, j as usize, Formalism::Shortcut)?;
        if is_paradoxical(&t).paradoxical {
            found.push(n);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn extremal_bounds_for_eight_five() {
        let b = remainder_bounds(8, 5).unwrap();
        assert_eq!(b.lower, Dyadic::new(BigInt::from(211), 8));
        assert_eq!(b.upper, Dyadic::new(BigInt::from(211), 5));
        // attained on the classes, checked by running the map
        let t = trajectory(&b.lower_class, 8, Formalism::Shortcut).unwrap();
        assert_eq!(*t.remainder(), b.lower);
        let t = trajectory(&b.upper_class, 8, Formalism::Shortcut).unwrap();
        assert_eq!(*t.remainder(), b.upper);
    }

    #[test]
    fn degenerate_bounds() {
        let b = remainder_bounds(6, 0).unwrap();
        assert!(b.lower.is_zero() && b.upper.is_zero());
        assert!(b.lower_class.is_zero());
        let b = remainder_bounds(5, 5).unwrap();
        assert_eq!(b.lower, b.upper);
        assert_eq!(b.lower_class, nat(31));
        let t = trajectory(&nat(31), 5, Formalism::Shortcut).unwrap();
        assert_eq!(*t.remainder(), Dyadic::new(BigInt::from(243 - 32), 5));
        assert_eq!(remainder_bounds(3, 4), Err(Error::OnesExceedLength { j: 3, q: 4 }));
    }

    #[test]
    fn modular_inverse() {
        for bits in [1u64, 2, 7, 64, 200] {
            let a = pow3(bits + 3);
            let inv = inverse_mod_pow2(&a, bits);
            assert!(((a * inv) % pow2(bits)).is_one() || bits == 0);
        }
    }

    #[test]
    fn mean_remainders() {
        assert_eq!(mean_remainder_check(1).unwrap(), ratio(1, 4));
        assert_eq!(mean_remainder_check(2).unwrap(), ratio(1, 2));
        assert_eq!(mean_remainder_check(12).unwrap(), ratio(3, 1));
        assert!(mean_remainder_check(23).is_err());
    }

    #[test]
    fn paradox_examples() {
        let c = is_paradoxical(&trajectory(&nat(7), 8, Formalism::Shortcut).unwrap());
        assert!(c.paradoxical);
        assert_eq!(c.coefficient, Dyadic::new(BigInt::from(243), 8));
        assert_eq!(c.remainder, Dyadic::new(BigInt::from(347), 8));
        assert_eq!(c.difference, BigInt::from(1));
        assert!(is_paradoxical(&trajectory(&nat(1), 2, Formalism::Shortcut).unwrap()).paradoxical);
        let seven = is_paradoxical(&trajectory(&nat(7), 7, Formalism::Shortcut).unwrap());
        assert!(!seven.paradoxical);
        assert_eq!(seven.difference, BigInt::from(-2));
    }

    #[test]
    fn en_ratio_examples() {
        let r = en_ratio_bounds(&trajectory(&nat(7), 8, Formalism::Shortcut).unwrap()).unwrap();
        assert_eq!(r.lower, ratio(13, 256));
        assert_eq!(r.ratio, ratio(347, 1792));
        assert!(r.lower_holds && r.upper_holds);
        let r = en_ratio_bounds(&trajectory(&nat(27), 45, Formalism::Shortcut).unwrap()).unwrap();
        assert_eq!(crate::dyadic::truncated_decimal(&r.ratio, 2), "12.96");
        assert!(r.upper_holds);
        assert_eq!(en_ratio_bounds(&trajectory(&nat(2), 1, Formalism::Shortcut).unwrap()), Err(Error::NoOddTerms));
    }

    #[test]
    fn ones_ratio_window_examples() {
        let t = trajectory(&nat(7), 8, Formalism::Shortcut).unwrap();
        let h = harmonic_data(&t).unwrap();
        let sum = ratio(1, 7) + ratio(1, 11) + ratio(1, 17) + ratio(1, 13) + ratio(1, 5);
        assert_eq!(h.sum_reciprocals, sum);
        assert!(ones_ratio_window(&t).unwrap());
        // a non-paradoxical prefix with coefficient above one fails the right side
        assert!(!ones_ratio_window(&trajectory(&nat(7), 3, Formalism::Shortcut).unwrap()).unwrap());
    }

    #[test]
    fn floor_log_ratio_values() {
        assert_eq!(floor_log_ratio(1), 0);
        assert_eq!(floor_log_ratio(8), 5);
        assert_eq!(floor_log_ratio(1539), 971);
        for j in 1..300u64 {
            let q = floor_log_ratio(j);
            assert!(pow3(q) <= pow2(j) && pow3(q + 1) > pow2(j));
        }
    }

    #[test]
    fn harmonic_caps() {
        assert!(!harmonic_cap_holds(3, &nat(1)).unwrap());
        assert!(harmonic_cap_holds(1, &nat(1)).is_err());
        assert_eq!(smallest_j_with_harmonic_cap(&nat(113383), 2, 5000).unwrap(), Some(1539));
        assert!(harmonic_cap_holds(1539, &nat(113383)).unwrap());
        assert!(!harmonic_cap_holds(1538, &nat(113383)).unwrap());
        assert_eq!(harmonic_exponent_ceiling(1539, &nat(113383)).unwrap(), 971);
    }

    #[test]
    fn classification_of_small_lengths() {
        assert_eq!(small_j_classification(3).unwrap(), Vec::<Natural>::new());
        for j in [2, 4, 6] {
            assert_eq!(small_j_classification(j).unwrap(), [nat(1), nat(2)]);
        }
        for j in [7, 9, 11] {
            assert_eq!(small_j_classification(j).unwrap(), [nat(1)]);
        }
        for j in [1, 5, 8, 10, 12] {
            assert_eq!(small_j_classification(j), Err(Error::UnsupportedLength(j)));
        }
    }
}
