//! The shortcut map `T` and the classic map `Col`, with the exact linear
//! decomposition `iterate = 3^q / 2^e * n + E` carried along every step.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dyadic::{pow2, pow3, Dyadic};
use crate::poset::ParityVector;
use crate::{Error, Result};

/// Unbounded non-negative integer.
pub type Natural = BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formalism {
    /// `n -> (3n+1)/2` for odd `n`, `n -> n/2` for even `n`.
    Shortcut,
    /// `n -> 3n+1` for odd `n`, `n -> n/2` for even `n`.
    Classic,
}

impl Formalism {
    pub fn name(self) -> &'static str {
        match self {
            Formalism::Shortcut => "shortcut",
            Formalism::Classic => "classic",
        }
    }
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formalism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shortcut" | "T" | "t" => Ok(Formalism::Shortcut),
            "classic" | "col" | "Col" => Ok(Formalism::Classic),
            other => Err(Error::InvalidParameter(alloc::format!("unknown formalism {other:?}"))),
        }
    }
}

/// Integer types the step loops can run on. Fixed-width words report
/// overflow with `None` so callers can retry with [`BigUint`].
pub trait Word: Clone + Ord {
    fn is_odd(&self) -> bool;
    fn is_one(&self) -> bool;
    fn try_step(&self, f: Formalism) -> Option<Self>;
    fn to_natural(&self) -> Natural;
}

impl Word for u64 {
    #[inline]
    fn is_odd(&self) -> bool {
        self & 1 == 1
    }

    #[inline]
    fn is_one(&self) -> bool {
        *self == 1
    }

    #[inline]
    fn try_step(&self, f: Formalism) -> Option<u64> {
        if self & 1 == 0 {
            return Some(self >> 1);
        }
        let up = self.checked_mul(3)?.checked_add(1)?;
        Some(match f {
            Formalism::Shortcut => up >> 1,
            Formalism::Classic => up,
        })
    }

    fn to_natural(&self) -> Natural {
        BigUint::from(*self)
    }
}

impl Word for BigUint {
    fn is_odd(&self) -> bool {
        Integer::is_odd(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn try_step(&self, f: Formalism) -> Option<BigUint> {
        Some(step_unchecked(self, f))
    }

    fn to_natural(&self) -> Natural {
        self.clone()
    }
}

fn step_unchecked(n: &Natural, f: Formalism) -> Natural {
    if Integer::is_even(n) {
        return n >> 1u32;
    }
    let up = n * 3u32 + 1u32;
    match f {
        Formalism::Shortcut => up >> 1u32,
        Formalism::Classic => up,
    }
}

/// One application of the chosen map.
pub fn step(n: &Natural, f: Formalism) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    Ok(step_unchecked(n, f))
}

/// `(q, e, E)` such that the current iterate equals `3^q / 2^e * n + E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    /// Odd steps taken so far.
    pub q: u64,
    /// Halvings performed so far.
    pub e: u64,
    pub remainder: Dyadic,
}

impl LinearForm {
    pub fn initial() -> Self {
        LinearForm { q: 0, e: 0, remainder: Dyadic::zero() }
    }

    /// Form of the next iterate, given the parity of the current one.
    pub fn advance(&self, odd: bool, f: Formalism) -> LinearForm {
        match (f, odd) {
            (Formalism::Shortcut, true) => LinearForm {
                q: self.q + 1,
                e: self.e + 1,
                remainder: self.remainder.triple_plus_one().halve(),
            },
            (Formalism::Classic, true) => LinearForm {
                q: self.q + 1,
                e: self.e,
                remainder: self.remainder.triple_plus_one(),
            },
            (_, false) => LinearForm {
                q: self.q,
                e: self.e + 1,
                remainder: self.remainder.halve(),
            },
        }
    }

    pub fn coefficient(&self) -> Dyadic {
        Dyadic::coefficient(self.q, self.e)
    }

    /// `C < 1`, decided as `3^q < 2^e`.
    pub fn coefficient_below_one(&self) -> bool {
        pow3(self.q) < pow2(self.e)
    }

    /// `C * n + E`.
    pub fn evaluate(&self, start: &Natural) -> Dyadic {
        let scaled = Dyadic::new(BigInt::from(pow3(self.q) * start), self.e);
        scaled.add(&self.remainder)
    }

    /// Checks `iterate * 2^e == 3^q * n + E * 2^e` over the integers.
    pub fn holds(&self, start: &Natural, iterate: &Natural) -> bool {
        if self.remainder.exp2() > self.e {
            return false;
        }
        let lhs = BigInt::from(iterate << self.e);
        let rhs = BigInt::from(pow3(self.q) * start) + self.remainder.numerator_at(self.e);
        lhs == rhs
    }
}

/// `form.advance(odd, f)` as a free function.
pub fn advance_form(form: &LinearForm, odd: bool, f: Formalism) -> LinearForm {
    form.advance(odd, f)
}

/// Streaming iterator over `(iterate, form)` pairs starting at step 0.
#[derive(Clone, Debug)]
pub struct Walk {
    formalism: Formalism,
    next: Option<(Natural, LinearForm)>,
}

impl Iterator for Walk {
    type Item = (Natural, LinearForm);

    fn next(&mut self) -> Option<Self::Item> {
        let (n, form) = self.next.take()?;
        let odd = Integer::is_odd(&n);
        let following = (step_unchecked(&n, self.formalism), form.advance(odd, self.formalism));
        self.next = Some(following);
        Some((n, form))
    }
}

/// Unbounded walk from `n`; the caller decides when to stop.
pub fn walk(n: &Natural, f: Formalism) -> Result<Walk> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    Ok(Walk { formalism: f, next: Some((n.clone(), LinearForm::initial())) })
}

/// `n, f(n), ..., f^j(n)` together with the linear form of every iterate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub start: Natural,
    pub formalism: Formalism,
    pub iterates: Vec<Natural>,
    pub forms: Vec<LinearForm>,
}

impl Trajectory {
    /// Number of steps `j`.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &Natural {
        self.iterates.last().expect("trajectory holds at least its start")
    }

    pub fn final_form(&self) -> &LinearForm {
        self.forms.last().expect("trajectory holds at least its start")
    }

    pub fn coefficient(&self) -> Dyadic {
        self.final_form().coefficient()
    }

    pub fn remainder(&self) -> &Dyadic {
        &self.final_form().remainder
    }

    /// Odd terms among all iterates except the last.
    pub fn odd_terms(&self) -> impl Iterator<Item = &Natural> {
        self.iterates[..self.steps()].iter().filter(|m| Integer::is_odd(*m))
    }

    pub fn contains(&self, value: &Natural) -> bool {
        self.iterates.iter().any(|m| m == value)
    }

    pub fn min(&self) -> &Natural {
        self.iterates.iter().min().expect("non-empty")
    }
}

pub fn trajectory(n: &Natural, j: usize, f: Formalism) -> Result<Trajectory> {
    let (iterates, forms) = walk(n, f)?.take(j + 1).unzip();
    Ok(Trajectory { start: n.clone(), formalism: f, iterates, forms })
}

/// Parities of the first `j` iterates.
pub fn parity_vector(n: &Natural, j: usize, f: Formalism) -> Result<ParityVector> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    let mut bits = Vec::with_capacity(j);
    let mut m = n.clone();
    for _ in 0..j {
        bits.push(Integer::is_odd(&m));
        m = step_unchecked(&m, f);
    }
    Ok(ParityVector::from_bits(&bits))
}

/// Parity vector of a machine-word start under the shortcut map; `n < 2^j`
/// fast path used by the exhaustive residue sweeps.
pub fn parity_vector_u64(n: u64, j: usize) -> Option<ParityVector> {
    let mut bits = Vec::with_capacity(j);
    let mut m = n;
    for _ in 0..j {
        bits.push(m & 1 == 1);
        m = m.try_step(Formalism::Shortcut)?;
    }
    Some(ParityVector::from_bits(&bits))
}

/// Numerator of `E_j(n)` over `2^j` for the shortcut map, in machine words.
/// Returns `None` on overflow.
pub fn shortcut_remainder_u128(n: u64, j: u32) -> Option<u128> {
    let mut m = n;
    let mut num: u128 = 0;
    for e in 0..j {
        if m & 1 == 1 {
            num = num.checked_mul(3)?.checked_add(1u128.checked_shl(e)?)?;
        }
        m = m.try_step(Formalism::Shortcut)?;
    }
    Some(num)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn naturals(vs: &[u64]) -> Vec<Natural> {
        vs.iter().map(|&v| nat(v)).collect()
    }

    #[test]
    fn single_steps() {
        assert_eq!(step(&nat(7), Formalism::Shortcut).unwrap(), nat(11));
        assert_eq!(step(&nat(2), Formalism::Shortcut).unwrap(), nat(1));
        assert_eq!(step(&nat(7), Formalism::Classic).unwrap(), nat(22));
        assert_eq!(step(&nat(0), Formalism::Classic), Err(Error::ZeroStart));
    }

    #[test]
    fn advance_from_origin() {
        let odd = LinearForm::initial().advance(true, Formalism::Shortcut);
        assert_eq!((odd.q, odd.e), (1, 1));
        assert_eq!(odd.remainder, Dyadic::new(BigInt::from(1), 1));
        let even = advance_form(&LinearForm::initial(), false, Formalism::Shortcut);
        assert_eq!((even.q, even.e), (0, 1));
        assert!(even.remainder.is_zero());
    }

    #[test]
    fn seven_after_eight_steps() {
        let t = trajectory(&nat(7), 8, Formalism::Shortcut).unwrap();
        assert_eq!(t.iterates, naturals(&[7, 11, 17, 26, 13, 20, 10, 5, 8]));
        let form = t.final_form();
        assert_eq!((form.q, form.e), (5, 8));
        assert_eq!(form.remainder, Dyadic::new(BigInt::from(347), 8));
        assert_eq!(t.coefficient(), Dyadic::new(BigInt::from(243), 8));
    }

    #[test]
    fn eighteen_after_eight_steps() {
        let t = trajectory(&nat(18), 8, Formalism::Shortcut).unwrap();
        assert_eq!(t.iterates, naturals(&[18, 9, 14, 7, 11, 17, 26, 13, 20]));
    }

    #[test]
    fn trivial_cycle_form() {
        let t = trajectory(&nat(1), 2, Formalism::Shortcut).unwrap();
        assert_eq!(t.iterates, naturals(&[1, 2, 1]));
        assert_eq!(t.coefficient(), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(*t.remainder(), Dyadic::new(BigInt::from(1), 2));
    }

    #[test]
    fn forms_hold_along_classic_walk() {
        let t = trajectory(&nat(27), 111, Formalism::Classic).unwrap();
        assert_eq!(*t.last(), nat(1));
        for (k, (m, form)) in t.iterates.iter().zip(&t.forms).enumerate() {
            assert!(form.holds(&t.start, m));
            assert_eq!(form.e + form.q, k as u64);
        }
    }

    #[test]
    fn parity_vectors() {
        let v = parity_vector(&nat(7), 8, Formalism::Shortcut).unwrap();
        assert_eq!(v.to_word(), "11101001");
        assert_eq!(v.ones(), 5);
        let zeros = parity_vector(&nat(3 << 6), 6, Formalism::Shortcut).unwrap();
        assert_eq!(zeros.to_word(), "000000");
        assert_eq!(parity_vector_u64(7, 8), Some(v));
    }

    #[test]
    fn word_overflow_is_reported() {
        assert_eq!((u64::MAX).try_step(Formalism::Shortcut), None);
        assert_eq!((u64::MAX - 1).try_step(Formalism::Shortcut), Some(u64::MAX >> 1));
    }

    #[test]
    fn remainder_numerator_matches_forms() {
        for n in 1..200u64 {
            let t = trajectory(&nat(n), 12, Formalism::Shortcut).unwrap();
            let num = shortcut_remainder_u128(n, 12).unwrap();
            assert_eq!(t.remainder().numerator_at(12), BigInt::from(num));
        }
    }
}
