//! Exact dyadic rationals `num / 2^exp2`.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A rational number whose denominator is a power of two.
///
/// Values are not kept canonical: the remainder of a linear form carries the
/// running halving count as its exponent so that each step is a shift and an
/// add. Equality and ordering compare the represented values.
#[derive(Clone, Debug)]
pub struct Dyadic {
    num: BigInt,
    exp2: u64,
}

impl Dyadic {
    pub fn new(num: BigInt, exp2: u64) -> Self {
        Dyadic { num, exp2 }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(value: impl Into<BigInt>) -> Self {
        Dyadic::new(value.into(), 0)
    }

    /// `3^q / 2^e`, the coefficient of a linear form.
    pub fn coefficient(q: u64, e: u64) -> Self {
        Dyadic::new(BigInt::from(pow3(q)), e)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp2(&self) -> u64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Strips common factors of two.
    pub fn canonical(&self) -> Self {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp2);
        Dyadic::new(&self.num >> tz, self.exp2 - tz)
    }

    /// Numerator after rescaling to denominator `2^exp2`; `exp2` must not be
    /// smaller than the current exponent.
    pub fn numerator_at(&self, exp2: u64) -> BigInt {
        assert!(exp2 >= self.exp2, "cannot rescale 2^{} down to 2^{exp2}", self.exp2);
        &self.num << (exp2 - self.exp2)
    }

    /// `self / 2`.
    pub fn halve(&self) -> Self {
        Dyadic::new(self.num.clone(), self.exp2 + 1)
    }

    /// `3 * self + 1`.
    pub fn triple_plus_one(&self) -> Self {
        let one = BigInt::one() << self.exp2;
        Dyadic::new(&self.num * 3u32 + one, self.exp2)
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        let e = self.exp2.max(other.exp2);
        Dyadic::new(self.numerator_at(e) + other.numerator_at(e), e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        let e = self.exp2.max(other.exp2);
        Dyadic::new(self.numerator_at(e) - other.numerator_at(e), e)
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.num * &other.num, self.exp2 + other.exp2)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Dyadic::new(&self.num * k, self.exp2)
    }

    /// Value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let c = self.canonical();
        (c.exp2 == 0).then_some(c.num)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp2)
    }

    /// Canonical `(numerator, denominator)` pair.
    pub fn to_parts(&self) -> (BigInt, BigUint) {
        let c = self.canonical();
        (c.num, BigUint::one() << c.exp2)
    }

    pub fn cmp_one(&self) -> Ordering {
        self.num.cmp(&(BigInt::one() << self.exp2))
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp2.max(other.exp2);
        self.numerator_at(e).cmp(&other.numerator_at(e))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.to_parts();
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

pub(crate) fn pow3(q: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(3u32), q as usize)
}

pub(crate) fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// Renders `num/den` with `places` decimals, truncated toward zero.
pub fn truncated_decimal(value: &BigRational, places: usize) -> alloc::string::String {
    use alloc::string::ToString;
    let scale = num_traits::pow::pow(BigInt::from(10u32), places);
    let scaled = (value.numer() * &scale) / value.denom();
    let neg = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let padded = if digits.len() <= places {
        let mut s = alloc::string::String::new();
        for _ in 0..(places + 1 - digits.len()) {
            s.push('0');
        }
        s.push_str(&digits);
        s
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let mut out = alloc::string::String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if places > 0 {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn ordering_ignores_representation() {
        let a = Dyadic::new(BigInt::from(6), 3);
        let b = Dyadic::new(BigInt::from(3), 2);
        assert_eq!(a, b);
        assert!(Dyadic::new(BigInt::from(7), 3) > b);
        assert_eq!(a.canonical().exp2(), 2);
    }

    #[test]
    fn canonical_zero_and_integers() {
        assert_eq!(Dyadic::new(BigInt::zero(), 9).canonical().exp2(), 0);
        assert_eq!(Dyadic::new(BigInt::from(12), 2).to_integer(), Some(BigInt::from(3)));
        assert_eq!(Dyadic::new(BigInt::from(5), 1).to_integer(), None);
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(Dyadic::new(BigInt::from(694), 9).to_string(), "347/256");
        assert_eq!(Dyadic::new(BigInt::from(-8), 2).to_string(), "-2");
    }

    #[test]
    fn truncation_rounds_toward_zero() {
        let r = BigRational::new(BigInt::from(347), BigInt::from(256));
        assert_eq!(truncated_decimal(&r, 2), "1.35");
        let r = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(truncated_decimal(&r, 3), "-0.333");
        let r = BigRational::new(BigInt::from(1), BigInt::from(200));
        assert_eq!(truncated_decimal(&r, 2), "0.00");
    }
}
