//! Per-start kernels: stopping times, delays, excursions and the exhaustive
//! paradox scan, plus the census that aggregates hits by `(j, q)`.
//!
//! The loops run on `u64` with checked arithmetic and restart on [`BigUint`]
//! when an iterate would overflow, so results never depend on word size.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::is_paradoxical;
use crate::dyadic::{pow3, Dyadic};
use crate::dynamics::{trajectory, Formalism, Natural, Trajectory, Word};
use crate::{Error, Result};

/// Default iteration budget for a single trajectory.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// Exact `3^q < 2^e` test through the bit lengths of powers of three.
///
/// `3^q` and `2^e` are never equal for `q >= 1`, and `3^q < 2^e` holds exactly
/// when `3^q` has at most `e` bits, so a table of bit lengths decides the
/// comparison with one lookup.
#[derive(Clone, Debug)]
pub struct CoefficientTest {
    bits: Vec<u64>,
}

impl CoefficientTest {
    pub fn new(max_q: usize) -> Self {
        let mut bits = Vec::with_capacity(max_q + 1);
        let mut power = BigUint::one();
        for _ in 0..=max_q {
            bits.push(power.bits());
            power *= 3u32;
        }
        CoefficientTest { bits }
    }

    /// `3^q / 2^e < 1`.
    #[inline]
    pub fn below_one(&self, q: u64, e: u64) -> bool {
        if q == 0 {
            return e > 0;
        }
        match self.bits.get(q as usize) {
            Some(&b) => b <= e,
            None => pow3(q).bits() <= e,
        }
    }
}

impl Default for CoefficientTest {
    fn default() -> Self {
        CoefficientTest::new(4096)
    }
}

/// A step count that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Steps {
    Finite(u64),
    Infinite,
}

/// One paradoxical sequence: `C = 3^q / 2^e < 1` and `last >= n`.
///
/// `j` counts steps of the map that produced it; for the shortcut map
/// `e = j`, for the classic map `e = j - q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParadoxHit {
    pub n: Natural,
    pub j: u64,
    pub q: u64,
    pub e: u64,
    pub coefficient: Dyadic,
    pub remainder: Dyadic,
    pub last: Natural,
    pub d: BigInt,
    pub start_odd: bool,
    pub end_odd: bool,
    pub formalism: Formalism,
}

impl ParadoxHit {
    fn new(n: Natural, j: u64, q: u64, e: u64, last: Natural, formalism: Formalism) -> Self {
        let three_q = BigInt::from(pow3(q));
        let scaled_last = BigInt::from(&last << e);
        let remainder = Dyadic::new(scaled_last - three_q * BigInt::from(n.clone()), e).canonical();
        let d = BigInt::from(last.clone()) - BigInt::from(n.clone());
        ParadoxHit {
            start_odd: n.bit(0),
            end_odd: last.bit(0),
            coefficient: Dyadic::coefficient(q, e).canonical(),
            remainder,
            d,
            n,
            j,
            q,
            e,
            last,
            formalism,
        }
    }

    pub fn from_trajectory(t: &Trajectory) -> Self {
        let form = t.final_form();
        ParadoxHit::new(t.start.clone(), t.steps() as u64, form.q, form.e, t.last().clone(), t.formalism)
    }

    /// Recomputes the sequence from scratch and checks every field.
    pub fn verify(&self) -> bool {
        let Ok(t) = trajectory(&self.n, self.j as usize, self.formalism) else {
            return false;
        };
        let check = is_paradoxical(&t);
        let form = t.final_form();
        let identity = self.coefficient.mul(&Dyadic::from_int(BigInt::from(self.n.clone()))).add(&self.remainder)
            == Dyadic::from_int(BigInt::from(self.last.clone()));
        check.paradoxical
            && *t.last() == self.last
            && form.q == self.q
            && form.e == self.e
            && check.coefficient == self.coefficient
            && check.remainder == self.remainder
            && check.difference == self.d
            && identity
    }

    /// Census key: halvings and odd steps.
    pub fn pair(&self) -> (u64, u64) {
        (self.e, self.q)
    }
}

/// Scan configuration shared by every start in a range.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub formalism: Formalism,
    pub budget: u64,
    test: CoefficientTest,
}

impl Kernel {
    pub fn new(formalism: Formalism, budget: u64) -> Self {
        Kernel { formalism, budget, test: CoefficientTest::default() }
    }

    /// Walks from `n` to 1 and appends every `j` at which the sequence is
    /// paradoxical. Past 1 the shortcut map only visits 1 and 2 and the
    /// classic map 1, 4 and 2, so stopping there loses nothing for `n >= 3`
    /// and `n >= 5` respectively; below that the cycle itself yields an
    /// infinite family that the scan deliberately leaves out.
    pub fn scan(&self, n: &Natural, out: &mut Vec<ParadoxHit>) -> Result<()> {
        let mark = out.len();
        if let Some(small) = n.to_u64() {
            match self.scan_word(&small, out) {
                Some(result) => return result,
                None => out.truncate(mark),
            }
        }
        self.scan_word(n, out).expect("unbounded integers never overflow")
    }

    fn scan_word<W: Word>(&self, n: &W, out: &mut Vec<ParadoxHit>) -> Option<Result<()>> {
        let shortcut = self.formalism == Formalism::Shortcut;
        let (mut q, mut e, mut j) = (0u64, 0u64, 0u64);
        let mut m = n.clone();
        while !m.is_one() {
            if j == self.budget {
                return Some(Err(Error::BudgetExhausted { start: n.to_natural(), budget: self.budget }));
            }
            let odd = m.is_odd();
            m = m.try_step(self.formalism)?;
            j += 1;
            if odd {
                q += 1;
                e += shortcut as u64;
            } else {
                e += 1;
            }
            if m >= *n && self.test.below_one(q, e) {
                out.push(ParadoxHit::new(n.to_natural(), j, q, e, m.to_natural(), self.formalism));
            }
        }
        Some(Ok(()))
    }

    /// All hits for starts in `lo..=hi`, in `(n, j)` order.
    pub fn scan_range(&self, lo: u64, hi: u64) -> Result<Vec<ParadoxHit>> {
        let mut out = Vec::new();
        for n in lo..=hi {
            let mark = out.len();
            match self.scan_word(&n, &mut out) {
                Some(result) => result?,
                None => {
                    out.truncate(mark);
                    self.scan_word(&Natural::from(n), &mut out).expect("unbounded integers never overflow")?;
                }
            }
        }
        Ok(out)
    }
}

/// Every paradoxical sequence `Omega_j(n)` with `lo <= n <= hi`.
pub fn enumerate_paradoxes(lo: &Natural, hi: &Natural, f: Formalism, budget: u64) -> Result<Vec<ParadoxHit>> {
    if *lo < Natural::from(3u32) || lo > hi {
        return Err(Error::InvalidParameter("the scan range must satisfy 3 <= lo <= hi".into()));
    }
    let kernel = Kernel::new(f, budget);
    let mut out = Vec::new();
    let mut n = lo.clone();
    while n <= *hi {
        kernel.scan(&n, &mut out)?;
        n += 1u32;
    }
    Ok(out)
}

fn stopping_pair<W: Word>(n: &W, test: &CoefficientTest, budget: u64) -> Option<Result<(u64, u64)>> {
    let (mut q, mut j) = (0u64, 0u64);
    let mut tau = None;
    let mut m = n.clone();
    loop {
        if j == budget {
            return Some(Err(Error::BudgetExhausted { start: n.to_natural(), budget }));
        }
        if m.is_odd() {
            q += 1;
        }
        m = m.try_step(Formalism::Shortcut)?;
        j += 1;
        if tau.is_none() && test.below_one(q, j) {
            tau = Some(j);
        }
        if m < *n {
            return Some(Ok((j, tau.expect("a smaller iterate forces coefficient below one"))));
        }
    }
}

/// `(t(n), tau(n))`: least `j` with `T^j(n) < n` and least `j` with
/// `C_j(n) < 1`, for `n >= 2`.
pub fn stopping_times(n: &Natural, test: &CoefficientTest, budget: u64) -> Result<(u64, u64)> {
    if n < &Natural::from(2u32) {
        return Err(Error::InvalidParameter("stopping times need n >= 2".into()));
    }
    if let Some(small) = n.to_u64() {
        if let Some(r) = stopping_pair(&small, test, budget) {
            return r;
        }
    }
    stopping_pair(n, test, budget).expect("unbounded integers never overflow")
}

/// Least `j` with `T^j(n) < n`; infinite for `n = 1`.
pub fn stopping_time(n: &Natural, budget: u64) -> Result<Steps> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    if One::is_one(n) {
        return Ok(Steps::Infinite);
    }
    stopping_times(n, &CoefficientTest::default(), budget).map(|(t, _)| Steps::Finite(t))
}

/// Least `j` with `3^(q_j(n)) < 2^j` under the shortcut map.
pub fn coeff_stopping_time(n: &Natural, budget: u64) -> Result<Steps> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    let test = CoefficientTest::default();
    let (mut q, mut j) = (0u64, 0u64);
    let mut m = n.clone();
    while j < budget {
        if m.bit(0) {
            q += 1;
        }
        m = crate::dynamics::step(&m, Formalism::Shortcut)?;
        j += 1;
        if test.below_one(q, j) {
            return Ok(Steps::Finite(j));
        }
    }
    Err(Error::BudgetExhausted { start: n.clone(), budget })
}

/// Delay, odd-step count and largest iterate of the walk to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub delay: u64,
    pub odd_steps: u64,
    pub max: Natural,
}

fn orbit_word<W: Word>(n: &W, f: Formalism, budget: u64) -> Option<Result<Orbit>> {
    let (mut j, mut q) = (0u64, 0u64);
    let mut m = n.clone();
    let mut max = n.clone();
    while !m.is_one() {
        if j == budget {
            return Some(Err(Error::BudgetExhausted { start: n.to_natural(), budget }));
        }
        if m.is_odd() {
            q += 1;
        }
        m = m.try_step(f)?;
        j += 1;
        if m > max {
            max = m.clone();
        }
    }
    Some(Ok(Orbit { delay: j, odd_steps: q, max: max.to_natural() }))
}

/// Walks from `n` to 1 once, collecting delay, odd steps and excursion.
pub fn orbit(n: &Natural, f: Formalism, budget: u64) -> Result<Orbit> {
    if n.is_zero() {
        return Err(Error::ZeroStart);
    }
    if let Some(small) = n.to_u64() {
        if let Some(r) = orbit_word(&small, f, budget) {
            return r;
        }
    }
    orbit_word(n, f, budget).expect("unbounded integers never overflow")
}

/// Least `j` with `f^j(n) = 1`.
pub fn delay(n: &Natural, f: Formalism, budget: u64) -> Result<u64> {
    orbit(n, f, budget).map(|o| o.delay)
}

/// Largest term of the sequence from `n` to 1.
pub fn max_excursion(n: &Natural, f: Formalism, budget: u64) -> Result<Natural> {
    orbit(n, f, budget).map(|o| o.max)
}

/// Starts whose stopping time differs from their coefficient stopping time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CstReport {
    pub checked: u64,
    pub counterexamples: Vec<(Natural, u64, u64)>,
    /// Largest `t(n) - tau(n)` seen.
    pub max_gap: u64,
}

impl CstReport {
    pub fn merge(&mut self, other: CstReport) {
        self.checked += other.checked;
        self.counterexamples.extend(other.counterexamples);
        self.max_gap = self.max_gap.max(other.max_gap);
    }
}

/// Checks `t(n) = tau(n)` for `lo <= n <= hi`.
pub fn verify_cst(lo: u64, hi: u64, budget: u64) -> Result<CstReport> {
    if lo < 2 {
        return Err(Error::InvalidParameter("t(1) is infinite; start the range at 2".into()));
    }
    let test = CoefficientTest::default();
    let mut report = CstReport::default();
    for n in lo..=hi {
        let n = Natural::from(n);
        let (t, tau) = stopping_times(&n, &test, budget)?;
        report.checked += 1;
        report.max_gap = report.max_gap.max(t - tau);
        if t != tau {
            report.counterexamples.push((n, t, tau));
        }
    }
    Ok(report)
}

/// Hits sharing one `(j, q)` pair; for the classic map `j` is the halving
/// count `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub j: u64,
    pub q: u64,
    pub count: u64,
    /// Odd first and odd last term.
    pub count_odd: u64,
    pub n_min: Natural,
    pub n_max: Natural,
    pub e_min: Dyadic,
    pub e_max: Dyadic,
    pub d_min: BigInt,
    pub d_max: BigInt,
}

impl CensusRow {
    pub fn coefficient(&self) -> Dyadic {
        Dyadic::coefficient(self.q, self.j).canonical()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSummary {
    pub total: u64,
    /// Hits with `d = 1`.
    pub near_cycles: u64,
    pub even_even: u64,
    pub distinct_starts: u64,
    /// Largest `d` with the start and last term that realise it first.
    pub max_d: Option<(BigInt, Natural, Natural)>,
    /// Hits whose sequence contains 11 (rows with `j = 8`) or 103 (others).
    pub landmark_hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub summary: CensusSummary,
}

/// Groups hits by `(j, q)` and summarises them.
pub fn census(hits: &[ParadoxHit]) -> Result<Census> {
    let mut rows: BTreeMap<(u64, u64), CensusRow> = BTreeMap::new();
    let mut starts = BTreeSet::new();
    let mut summary = CensusSummary {
        total: hits.len() as u64,
        near_cycles: 0,
        even_even: 0,
        distinct_starts: 0,
        max_d: None,
        landmark_hits: 0,
    };
    for h in hits {
        let (j, q) = h.pair();
        let row = rows.entry((j, q)).or_insert_with(|| CensusRow {
            j,
            q,
            count: 0,
            count_odd: 0,
            n_min: h.n.clone(),
            n_max: h.n.clone(),
            e_min: h.remainder.clone(),
            e_max: h.remainder.clone(),
            d_min: h.d.clone(),
            d_max: h.d.clone(),
        });
        row.count += 1;
        row.count_odd += (h.start_odd && h.end_odd) as u64;
        row.n_min = row.n_min.clone().min(h.n.clone());
        row.n_max = row.n_max.clone().max(h.n.clone());
        row.e_min = row.e_min.clone().min(h.remainder.clone());
        row.e_max = row.e_max.clone().max(h.remainder.clone());
        row.d_min = row.d_min.clone().min(h.d.clone());
        row.d_max = row.d_max.clone().max(h.d.clone());

        starts.insert(h.n.clone());
        summary.near_cycles += h.d.is_one() as u64;
        summary.even_even += (!h.start_odd && !h.end_odd) as u64;
        if summary.max_d.as_ref().map_or(true, |(d, _, _)| h.d > *d) {
            summary.max_d = Some((h.d.clone(), h.n.clone(), h.last.clone()));
        }
        let landmark = Natural::from(if h.e == 8 { 11u32 } else { 103 });
        if trajectory(&h.n, h.j as usize, h.formalism)?.contains(&landmark) {
            summary.landmark_hits += 1;
        }
    }
    debug_assert!(hits.iter().all(|h| !h.d.is_negative()));
    summary.distinct_starts = starts.len() as u64;
    Ok(Census { rows: rows.into_values().collect(), summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn coefficient_test_matches_powers() {
        let test = CoefficientTest::new(50);
        for q in 0..80u64 {
            for e in 0..130u64 {
                assert_eq!(test.below_one(q, e), pow3(q) < (BigUint::one() << e), "q={q} e={e}");
            }
        }
    }

    #[test]
    fn stopping_time_examples() {
        assert_eq!(stopping_time(&nat(7), 1000).unwrap(), Steps::Finite(7));
        assert_eq!(stopping_time(&nat(2), 1000).unwrap(), Steps::Finite(1));
        assert_eq!(stopping_time(&nat(27), 1000).unwrap(), Steps::Finite(59));
        assert_eq!(stopping_time(&nat(1), 1000).unwrap(), Steps::Infinite);
        assert_eq!(coeff_stopping_time(&nat(7), 1000).unwrap(), Steps::Finite(7));
        assert_eq!(coeff_stopping_time(&nat(1), 1000).unwrap(), Steps::Finite(2));
        assert_eq!(coeff_stopping_time(&nat(1000), 1000).unwrap(), Steps::Finite(1));
        assert!(matches!(stopping_time(&nat(27), 10), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn delays_and_excursions() {
        assert_eq!(delay(&nat(1), Formalism::Shortcut, 10).unwrap(), 0);
        assert_eq!(delay(&nat(7), Formalism::Shortcut, 100).unwrap(), 11);
        assert_eq!(max_excursion(&nat(27), Formalism::Shortcut, 1000).unwrap(), nat(4616));
        assert_eq!(max_excursion(&nat(27), Formalism::Classic, 1000).unwrap(), nat(9232));
        assert_eq!(max_excursion(&nat(1 << 20), Formalism::Shortcut, 100).unwrap(), nat(1 << 20));
        for n in 2..2000u64 {
            let t = orbit(&nat(n), Formalism::Shortcut, 10_000).unwrap();
            let c = delay(&nat(n), Formalism::Classic, 10_000).unwrap();
            assert_eq!(c, t.delay + t.odd_steps);
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // the first step from this start already leaves 64 bits
        let n = nat(u64::MAX);
        let fast = orbit(&n, Formalism::Shortcut, 100_000).unwrap();
        assert!(fast.max > nat(u64::MAX));
        let mut hits = Vec::new();
        Kernel::new(Formalism::Shortcut, 100_000).scan(&n, &mut hits).unwrap();
        assert!(hits.iter().all(ParadoxHit::verify));
    }

    #[test]
    fn hits_from_seven() {
        let hits = enumerate_paradoxes(&nat(7), &nat(7), Formalism::Shortcut, 1000).unwrap();
        assert_eq!(hits.len(), 1);
        let h = &hits[0];
        assert_eq!((h.j, h.q, h.e), (8, 5, 8));
        assert_eq!(h.remainder, Dyadic::new(BigInt::from(347), 8));
        assert_eq!(h.d, BigInt::from(1));
        assert!(h.start_odd && !h.end_odd);
        assert!(h.verify());
    }

    #[test]
    fn eight_hundred_fifty_nine() {
        let hits = enumerate_paradoxes(&nat(859), &nat(859), Formalism::Shortcut, 1000).unwrap();
        let got: Vec<(u64, Natural)> = hits.iter().map(|h| (h.j, h.last.clone())).collect();
        assert_eq!(got, [(46, nat(890)), (65, nat(911)), (73, nat(866))]);
    }

    #[test]
    fn scan_range_rejects_small_starts() {
        assert!(enumerate_paradoxes(&nat(2), &nat(10), Formalism::Shortcut, 100).is_err());
        assert!(enumerate_paradoxes(&nat(10), &nat(9), Formalism::Shortcut, 100).is_err());
    }

    #[test]
    fn small_cst_range() {
        let r = verify_cst(2, 5000, 10_000).unwrap();
        assert_eq!(r.checked, 4999);
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.max_gap, 0);
        assert!(verify_cst(1, 3, 100).is_err());
    }

    #[test]
    fn census_of_the_eight_row() {
        let hits = enumerate_paradoxes(&nat(3), &nat(30), Formalism::Shortcut, 1000).unwrap();
        let c = census(&hits).unwrap();
        assert_eq!(c.rows.len(), 1);
        let row = &c.rows[0];
        assert_eq!((row.j, row.q, row.count, row.count_odd), (8, 5, 5, 0));
        assert_eq!((row.n_min.clone(), row.n_max.clone()), (nat(7), nat(25)));
        assert_eq!(c.summary.landmark_hits, 5);
    }
}
