//! Diophantine side: the continued fraction of `log 2 / log 3`, pairs
//! `(a, b)` with `3^a / 2^b` just below one, the construction turning such a
//! pair into a paradoxical sequence, the lower bound on `|j log 2 - q log 3|`
//! and the heuristic cap on paradoxical lengths.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::{is_paradoxical, ParadoxCheck};
use crate::dyadic::{pow2, pow3};
use crate::dynamics::{trajectory, walk, Formalism, Natural, Trajectory};
use crate::real::{self, decide, Interval, DEFAULT_PRECISION_CAP};
use crate::search::ParadoxHit;
use crate::{Error, Result};

/// Largest number of convergents [`convergents`] will produce.
pub const MAX_CONVERGENTS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Even index: `p/q < log 2 / log 3`.
    Below,
    /// Odd index: `p/q > log 2 / log 3`.
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigUint,
    pub q: BigUint,
    pub side: Side,
}

/// Partial quotients of `log 2 / log 3`, read off a certified enclosure: a
/// quotient is accepted only when both endpoints of the interval agree on it.
pub fn partial_quotients(count: usize) -> Result<Vec<BigUint>> {
    if count > MAX_CONVERGENTS {
        return Err(Error::InvalidParameter(alloc::format!("at most {MAX_CONVERGENTS} convergents are supported")));
    }
    decide(DEFAULT_PRECISION_CAP, |prec| {
        let x = real::log3_of_2(prec);
        let terms = common_expansion(&x.lower(), &x.upper(), count);
        (terms.len() >= count).then_some(terms)
    })
}

/// Leading continued-fraction terms shared by two positive rationals.
fn common_expansion(a: &BigRational, b: &BigRational, count: usize) -> Vec<BigUint> {
    let (mut an, mut ad) = (a.numer().clone(), a.denom().clone());
    let (mut bn, mut bd) = (b.numer().clone(), b.denom().clone());
    let mut terms = Vec::new();
    while terms.len() < count && !ad.is_zero() && !bd.is_zero() {
        let (qa, ra) = an.div_mod_floor(&ad);
        let (qb, rb) = bn.div_mod_floor(&bd);
        if qa != qb || ra.is_zero() || rb.is_zero() {
            break;
        }
        terms.push(qa.to_biguint().expect("positive ratio"));
        (an, ad) = (ad, ra);
        (bn, bd) = (bd, rb);
    }
    terms
}

/// Partial quotients by exact power comparisons only.
///
/// Writes the current complete quotient as `log A / log B` for rationals
/// `A, B > 1`; its floor is the largest `k` with `B^k <= A`, after which the
/// pair becomes `(B, A / B^k)`. The rationals grow with the convergent
/// denominators, so this is practical only for the first dozen or so terms.
pub fn partial_quotients_exact(count: usize) -> Vec<BigUint> {
    let mut a = BigRational::from_integer(BigInt::from(2));
    let mut b = BigRational::from_integer(BigInt::from(3));
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let mut k = 0u64;
        let mut power = BigRational::one();
        while &power * &b <= a {
            power *= &b;
            k += 1;
        }
        terms.push(BigUint::from(k));
        let rest = &a / &power;
        if rest.is_one() {
            break;
        }
        a = b;
        b = rest;
    }
    terms
}

fn from_quotients(terms: &[BigUint]) -> Vec<Convergent> {
    let (mut p_prev, mut p) = (BigUint::zero(), BigUint::one());
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::zero());
    let mut out = Vec::with_capacity(terms.len());
    for (index, a) in terms.iter().enumerate() {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        let side = if index % 2 == 0 { Side::Below } else { Side::Above };
        out.push(Convergent { index, p: p.clone(), q: q.clone(), side });
    }
    out
}

/// The first `count` convergents `0/1, 1/1, 1/2, 2/3, 5/8, ...`.
pub fn convergents(count: usize) -> Result<Vec<Convergent>> {
    Ok(from_quotients(&partial_quotients(count)?))
}

/// Exponents with `1 - eps < 3^a / 2^b < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ApproxPair {
    pub a: u64,
    pub b: u64,
}

/// Exact-check limit; beyond it the pair test uses certified logarithms.
const EXACT_PAIR_BITS: u64 = 1 << 20;

impl ApproxPair {
    /// `(1 - eps) 2^b < 3^a < 2^b`.
    pub fn satisfies(&self, eps: &BigRational) -> Result<bool> {
        let one = BigRational::one();
        let keep = &one - eps;
        if self.b <= EXACT_PAIR_BITS {
            let three = BigInt::from(pow3(self.a));
            let two = BigInt::from(pow2(self.b));
            let left = BigRational::from_integer(two.clone()) * &keep;
            return Ok(left < BigRational::from_integer(three.clone()) && three < two);
        }
        // ln(1 - eps) < a ln 3 - b ln 2 < 0
        decide(DEFAULT_PRECISION_CAP, |prec| {
            let gap = real::ln3(prec)
                .mul_int(&BigInt::from(self.a))
                .sub(&real::ln2(prec).mul_int(&BigInt::from(self.b)));
            let below_one = gap.sign()?;
            let floor = real::ln_ratio(keep.numer().magnitude(), keep.denom().magnitude(), prec);
            let above = gap.cmp_certain(&floor)?;
            Some(below_one == Ordering::Less && above == Ordering::Greater)
        })
    }
}

/// The first `count` pairs `(p_n, q_n)` from even-indexed convergents
/// (`n >= 2`) that satisfy `1 - eps < 3^p / 2^q < 1`.
pub fn approx_pairs(eps: &BigRational, count: usize) -> Result<Vec<ApproxPair>> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::InvalidParameter("epsilon must lie strictly between 0 and 1".into()));
    }
    let mut pairs = Vec::with_capacity(count);
    let mut depth = 8;
    loop {
        pairs.clear();
        for c in convergents(depth)?.into_iter().filter(|c| c.index >= 2 && c.side == Side::Below) {
            let (Some(a), Some(b)) = (c.p.to_u64(), c.q.to_u64()) else {
                break;
            };
            let pair = ApproxPair { a, b };
            if pair.satisfies(eps)? {
                pairs.push(pair);
                if pairs.len() == count {
                    return Ok(pairs);
                }
            }
        }
        if depth == MAX_CONVERGENTS {
            return Err(Error::InvalidParameter(alloc::format!(
                "only {} pairs exist among the first {MAX_CONVERGENTS} convergents",
                pairs.len()
            )));
        }
        depth = (depth * 2).min(MAX_CONVERGENTS);
    }
}

/// Result of running the divergent-to-paradoxical construction once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    /// Starting value of the built sequence (`n`, or `2^(b-j) n` if lifted).
    pub start: Natural,
    /// Least `j` with `q_j(n) = a`.
    pub reach: u64,
    pub lifted: bool,
    pub trajectory: Trajectory,
    pub check: ParadoxCheck,
    /// Unlifted, paradoxical, `n != 1` and `n` is the minimum of its own
    /// sequence: a stopping time strictly above the coefficient stopping time.
    pub cst_counterexample: bool,
}

impl Construction {
    pub fn hit(&self) -> Option<ParadoxHit> {
        self.check.paradoxical.then(|| ParadoxHit::from_trajectory(&self.trajectory))
    }
}

/// `1 - 1/(4n) < 3^a / 2^b < 1`.
pub fn pair_in_set(n: &Natural, pair: ApproxPair) -> bool {
    let three = pow3(pair.a);
    let two = pow2(pair.b);
    let four_n = n * 4u32;
    three < two && (&four_n - 1u32) * &two < four_n * three
}

/// Builds the sequence of the construction for `n` and the pair: walks until
/// `a` odd steps have been taken at step `j`; if `j >= b` the candidate is the
/// length-`j` sequence from `n`, otherwise the length-`b` sequence from
/// `2^(b-j) n`. The result is always re-checked against the definition.
pub fn divergent_to_paradox(n: &Natural, pair: ApproxPair, budget: u64) -> Result<Construction> {
    if !n.is_zero() && !pair_in_set(n, pair) {
        return Err(Error::PairOutsideSet { n: n.clone(), a: pair.a, b: pair.b });
    }
    run_construction(n, pair, budget)
}

/// The construction without the membership check on the pair, for
/// exercising the lifting branch, which no genuine pair reaches at small `n`.
pub fn run_construction(n: &Natural, pair: ApproxPair, budget: u64) -> Result<Construction> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    let reach = walk(n, Formalism::Shortcut)?
        .take_while(|(_, form)| form.q < pair.a)
        .take(budget as usize + 1)
        .count() as u64;
    if reach > budget {
        return Err(Error::BudgetExhausted { start: n.clone(), budget });
    }
    let (start, length, lifted) = if reach >= pair.b {
        (n.clone(), reach, false)
    } else {
        (n << (pair.b - reach), pair.b, true)
    };
    let t = trajectory(&start, length as usize, Formalism::Shortcut)?;
    let check = is_paradoxical(&t);
    let cst_counterexample = !lifted && check.paradoxical && !n.is_one() && t.min() == n;
    Ok(Construction { start, reach, lifted, trajectory: t, check, cst_counterexample })
}

/// `|j log 2 - q log 3| >= H^(-13.3)` with `H = max(j, q)`, decided as
/// `|L|^10 H^133 >= 1` on certified enclosures.
pub fn rhin_gap_ok(j: u64, q: u64) -> Result<bool> {
    let h = j.max(q);
    if h < 2 {
        return Err(Error::InvalidParameter("the gap bound needs max(j, q) >= 2".into()));
    }
    let scale = num_traits::pow::pow(BigInt::from(h), 133);
    decide(DEFAULT_PRECISION_CAP, |prec| {
        let gap = real::ln_ratio(&pow2(j), &pow3(q), prec).abs();
        gap.sign().filter(|s| *s == Ordering::Greater)?;
        let lhs = gap.pow(10)?.mul_int(&scale);
        let verdict = lhs.cmp_certain(&Interval::from_int(1, prec))?;
        Some(verdict != Ordering::Less)
    })
}

/// `ln(3 log 3 / log 2)`, the threshold of the heuristic cap.
fn heuristic_threshold(prec: u32) -> Interval {
    let ratio = real::ln3(prec + 16).div(&real::ln2(prec + 16)).expect("ln 2 is positive");
    ratio.mul_int(&BigInt::from(3)).ln().expect("positive").round_to(prec)
}

/// `3 log 3 / log 2 = 4.754...`.
pub fn heuristic_threshold_constant(prec: u32) -> Interval {
    let ratio = real::ln3(prec + 16).div(&real::ln2(prec + 16)).expect("ln 2 is positive");
    ratio.mul_int(&BigInt::from(3)).round_to(prec)
}

/// Sign of `14.3 ln j - j/(alpha beta) - ln(3 log 3 / log 2)`.
fn heuristic_sign(j: u64, product: &BigRational) -> Result<Ordering> {
    decide(DEFAULT_PRECISION_CAP, |prec| {
        let w = prec + 16;
        let growth = real::ln_int(&BigUint::from(j), w).mul_rational(&BigRational::new(143.into(), 10.into()));
        let decay = Interval::from_rational(&(BigRational::from_integer(j.into()) / product), w);
        growth.sub(&decay).sub(&heuristic_threshold(w)).sign()
    })
}

/// Largest `j` with `j^14.3 e^(-j/(alpha beta)) > 3 log 3 / log 2`, or `None`
/// when no positive `j` qualifies.
///
/// The left side peaks at `j = 14.3 alpha beta` and decreases after it, so
/// the answer is found by doubling and bisection to the right of the peak.
pub fn heuristic_j_cap(alpha: &BigRational, beta: &BigRational) -> Result<Option<u64>> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::InvalidParameter("alpha and beta must be positive".into()));
    }
    let product = alpha * beta;
    let peak = (&product * BigRational::new(143.into(), 10.into())).ceil().to_integer();
    let start = peak.to_u64().ok_or_else(|| Error::InvalidParameter("alpha * beta is too large".into()))?.max(1);
    let holds = |j: u64| heuristic_sign(j, &product).map(|s| s == Ordering::Greater);
    if !holds(start)? {
        let before = start - 1;
        return Ok(if before >= 1 && holds(before)? { Some(before) } else { None });
    }
    let mut lo = start;
    let mut hi = start.saturating_mul(2).max(2);
    while holds(hi)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| Error::InvalidParameter("cap overflows u64".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn pq(c: &Convergent) -> (u64, u64) {
        (c.p.to_u64().unwrap(), c.q.to_u64().unwrap())
    }

    #[test]
    fn leading_convergents() {
        let cs = convergents(7).unwrap();
        let got: Vec<_> = cs.iter().map(pq).collect();
        assert_eq!(got, [(0, 1), (1, 1), (1, 2), (2, 3), (5, 8), (12, 19), (41, 65)]);
        let quotients: Vec<u64> = partial_quotients(4).unwrap().iter().map(|a| a.to_u64().unwrap()).collect();
        assert_eq!(quotients, [0, 1, 1, 1]);
    }

    #[test]
    fn certified_and_exact_expansions_agree() {
        assert_eq!(partial_quotients(14).unwrap(), partial_quotients_exact(14));
        let exact: Vec<u64> = partial_quotients_exact(11).iter().map(|a| a.to_u64().unwrap()).collect();
        assert_eq!(exact, [0, 1, 1, 1, 2, 2, 3, 1, 5, 2, 23]);
    }

    #[test]
    fn sides_match_power_comparisons() {
        for c in convergents(16).unwrap() {
            let (p, q) = pq(&c);
            let below = pow3(p) < pow2(q);
            assert_eq!(below, c.side == Side::Below, "{p}/{q}");
        }
        assert!(convergents(61).is_err());
    }

    #[test]
    fn pairs_for_small_epsilons() {
        let pairs = approx_pairs(&r(1, 4), 3).unwrap();
        assert_eq!(pairs[0], ApproxPair { a: 5, b: 8 });
        assert_eq!(pairs[1], ApproxPair { a: 41, b: 65 });
        assert_eq!(approx_pairs(&r(1, 2), 1).unwrap(), vec![ApproxPair { a: 1, b: 2 }]);
        for p in approx_pairs(&r(1, 100), 4).unwrap() {
            assert!(p.satisfies(&r(1, 100)).unwrap());
            assert!(p.b > p.a);
        }
        assert!(approx_pairs(&r(0, 1), 1).is_err());
    }

    #[test]
    fn construction_from_one() {
        let pair = ApproxPair { a: 5, b: 8 };
        let c = divergent_to_paradox(&nat(1), pair, 100).unwrap();
        assert_eq!(c.reach, 9);
        assert!(!c.lifted && c.check.paradoxical && !c.cst_counterexample);
        assert_eq!(c.check.coefficient, crate::Dyadic::new(243.into(), 9));
        assert_eq!(*c.trajectory.last(), nat(2));
        assert!(c.hit().is_some());
    }

    #[test]
    fn construction_mechanism_and_errors() {
        let pair = ApproxPair { a: 5, b: 8 };
        // 31 reaches five odd steps after five steps; the pair is not in the
        // set for 31, so only the unchecked mechanism lifts it
        assert!(matches!(divergent_to_paradox(&nat(31), pair, 100), Err(Error::PairOutsideSet { .. })));
        let c = run_construction(&nat(31), pair, 100).unwrap();
        assert!(c.lifted);
        assert_eq!(c.reach, 5);
        assert_eq!(c.start, nat(31 << 3));
        assert!(!c.check.paradoxical && c.hit().is_none());
        // 3 falls into the trivial cycle: the premise fails, the mechanism still runs
        let c = divergent_to_paradox(&nat(3), pair, 100).unwrap();
        assert_eq!(c.check.paradoxical, is_paradoxical(&c.trajectory).paradoxical);
        assert!(!c.cst_counterexample);
        assert!(matches!(divergent_to_paradox(&nat(3), ApproxPair { a: 1, b: 2 }, 10), Err(Error::PairOutsideSet { .. })));
        assert!(matches!(
            divergent_to_paradox(&nat(1), ApproxPair { a: 41, b: 65 }, 20),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn rhin_examples() {
        assert!(rhin_gap_ok(8, 5).unwrap());
        assert!(rhin_gap_ok(65, 41).unwrap());
        assert!(rhin_gap_ok(2, 1).unwrap());
        assert!(rhin_gap_ok(1, 1).is_err());
    }

    #[test]
    fn heuristic_caps() {
        let c = heuristic_threshold_constant(64);
        assert!(c.lower() > r(4754, 1000) && c.upper() < r(4755, 1000));
        assert_eq!(heuristic_j_cap(&r(42, 1), &r(3, 1)).unwrap(), Some(17396));
        let smaller = heuristic_j_cap(&r(37, 1), &r(26, 10)).unwrap().unwrap();
        assert!(smaller < 17396);
        assert_eq!(heuristic_j_cap(&r(1, 1000), &r(1, 1000)).unwrap(), None);
        assert!(heuristic_j_cap(&r(-1, 1), &r(1, 1)).is_err());
    }
}
