//! Certified interval arithmetic on fixed-point big integers.
//!
//! An [`Interval`] is a pair of integers `lo <= hi` read as
//! `[lo / 2^prec, hi / 2^prec]`; every operation rounds outward so the true
//! real value always lies inside. Comparisons report `None` when the interval
//! straddles the threshold, and [`decide`] retries at doubled precision until
//! a hard cap, after which the caller gets [`Error::Undecided`].

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub const START_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION_CAP: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    floor_div(a, &(BigInt::one() << k))
}

fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    ceil_div(a, &(BigInt::one() << k))
}

impl Interval {
    pub fn new(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        let v = v.into() << prec;
        Interval::new(v.clone(), v, prec)
    }

    /// Encloses `num / den`; `den` must be non-zero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled = num << prec;
        Interval::new(floor_div(&scaled, &den), ceil_div(&scaled, &den), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    /// Same enclosure at a lower precision.
    pub fn round_to(&self, prec: u32) -> Interval {
        if prec >= self.prec {
            let k = prec - self.prec;
            return Interval::new(&self.lo << k, &self.hi << k, prec);
        }
        let k = self.prec - prec;
        Interval::new(shr_floor(&self.lo, k), shr_ceil(&self.hi, k), prec)
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let p = self.prec.max(other.prec);
        (self.round_to(p), other.round_to(p))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::new(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::new(a.lo - b.hi, a.hi - b.lo, a.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo, self.prec)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Interval::new(shr_floor(min, a.prec), shr_ceil(max, a.prec), a.prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let (x, y) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval::new(y, x, self.prec)
        } else {
            Interval::new(x, y, self.prec)
        }
    }

    /// Division by a non-zero integer.
    pub fn div_int(&self, k: &BigInt) -> Interval {
        let (lo, hi) = if k.is_negative() { (-&self.hi, -&self.lo) } else { (self.lo.clone(), self.hi.clone()) };
        let k = k.abs();
        Interval::new(floor_div(&lo, &k), ceil_div(&hi, &k), self.prec)
    }

    pub fn mul_rational(&self, r: &BigRational) -> Interval {
        self.mul_int(r.numer()).div_int(r.denom())
    }

    /// `self / other`; `None` when `other` may contain zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = self.aligned(other);
        if b.sign()? == Ordering::Equal {
            return None;
        }
        let p = a.prec;
        let q = |x: &BigInt, y: &BigInt| (floor_div(&(x << p), y), ceil_div(&(x << p), y));
        let quotients = [q(&a.lo, &b.lo), q(&a.lo, &b.hi), q(&a.hi, &b.lo), q(&a.hi, &b.hi)];
        let lo = quotients.iter().map(|x| &x.0).min().expect("four quotients").clone();
        let hi = quotients.iter().map(|x| &x.1).max().expect("four quotients").clone();
        Some(Interval::new(lo, hi, p))
    }

    /// Integer power of a non-negative interval.
    pub fn pow(&self, k: u32) -> Option<Interval> {
        if self.lo.is_negative() {
            return None;
        }
        let mut acc = Interval::from_int(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Some(acc)
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let top = (-&self.lo).max(self.hi.clone());
            Interval::new(BigInt::zero(), top, self.prec)
        }
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let den = BigUint::one() << self.prec;
        let lo = ln_ratio(self.lo.magnitude(), &den, self.prec);
        let hi = ln_ratio(self.hi.magnitude(), &den, self.prec);
        Some(Interval::new(lo.lo, hi.hi, self.prec))
    }

    /// Sign of every point in the interval, if they agree.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Position relative to `other` when the two enclosures are disjoint.
    pub fn cmp_certain(&self, other: &Interval) -> Option<Ordering> {
        self.sub(other).sign()
    }

    /// `floor(x)` if it is the same for every point of the interval.
    pub fn floor(&self) -> Option<BigInt> {
        let a = shr_floor(&self.lo, self.prec);
        let b = shr_floor(&self.hi, self.prec);
        (a == b).then_some(a)
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        let s = v << self.prec;
        self.lo <= s && s <= self.hi
    }
}

/// Runs `attempt` at increasing precision until it returns a verdict.
pub fn decide<T>(cap: u32, mut attempt: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut prec = START_PRECISION.min(cap);
    loop {
        if let Some(v) = attempt(prec) {
            return Ok(v);
        }
        if prec >= cap {
            return Err(Error::Undecided { precision: cap });
        }
        prec = prec.saturating_mul(2).min(cap);
    }
}

/// `atanh(u / v)` for `0 <= u / v <= 1/3`, as `[sum, sum + err]` in units of
/// `2^-w`.
fn atanh_small(u: &BigUint, v: &BigUint, w: u32) -> (BigInt, BigInt) {
    debug_assert!(u * 3u32 <= *v);
    let u2 = u * u;
    let v2 = v * v;
    let mut power = (u << w) / v;
    let mut sum = BigUint::zero();
    let mut terms: u64 = 0;
    while !power.is_zero() {
        sum += &power / (2 * terms + 1);
        power = power * &u2 / &v2;
        terms += 1;
    }
    // each truncated term is within 3 ulps; the tail after the loop is below 3 ulps
    let err = BigUint::from(3 * terms + 3);
    let lo = BigInt::from(sum);
    let hi = &lo + BigInt::from(err);
    (lo, hi)
}

fn guard_bits(prec: u32) -> u32 {
    48 + (32 - prec.leading_zeros())
}

/// Encloses `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let w = prec + guard_bits(prec);
    let (lo, hi) = atanh_small(&BigUint::one(), &BigUint::from(3u32), w);
    Interval::new(lo * 2, hi * 2, w).round_to(prec)
}

/// Encloses `ln 3 = ln 2 + 2 atanh(1/5)`.
pub fn ln3(prec: u32) -> Interval {
    let w = prec + guard_bits(prec);
    let (lo, hi) = atanh_small(&BigUint::one(), &BigUint::from(5u32), w);
    let tail = Interval::new(lo * 2, hi * 2, w);
    ln2(w).add(&tail).round_to(prec)
}

/// Encloses `ln(p / q)` for positive integers `p`, `q`.
pub fn ln_ratio(p: &BigUint, q: &BigUint, prec: u32) -> Interval {
    assert!(!p.is_zero() && !q.is_zero(), "logarithm of a non-positive ratio");
    let mut k = p.bits() as i64 - q.bits() as i64;
    let (mut a, mut b) = if k >= 0 { (p.clone(), q << k as u64) } else { (p << (-k) as u64, q.clone()) };
    if &a * 3u32 > &b * 4u32 {
        b <<= 1u32;
        k += 1;
    } else if &a * 3u32 < &b * 2u32 {
        a <<= 1u32;
        k -= 1;
    }
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + guard_bits(prec) + kbits;
    let (diff, sign) = if a >= b { (&a - &b, Sign::Plus) } else { (&b - &a, Sign::Minus) };
    let (lo, hi) = atanh_small(&diff, &(&a + &b), w);
    let series = Interval::new(lo * 2, hi * 2, w);
    let series = if sign == Sign::Minus { series.neg() } else { series };
    ln2(w).mul_int(&BigInt::from(k)).add(&series).round_to(prec)
}

pub fn ln_int(n: &BigUint, prec: u32) -> Interval {
    ln_ratio(n, &BigUint::one(), prec)
}

/// Encloses `log 2 / log 3`.
pub fn log3_of_2(prec: u32) -> Interval {
    let w = prec + 8;
    ln2(w).div(&ln3(w)).expect("ln 3 is positive").round_to(prec)
}
