//! The reproduction scoreboard behind `--paper-check`: every published
//! figure the library can recompute at desk scale, each reported as one
//! pass/fail line.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use paradox_core::bounds::{
    en_ratio_bounds, mean_remainder_check, ones_ratio_window, remainder_bounds,
};
use paradox_core::dynamics::{parity_vector_u64, shortcut_remainder_u128, trajectory};
use paradox_core::numtheory::{convergents, heuristic_j_cap, rhin_gap_ok};
use paradox_core::poset::{check_remainder_monotonicity, class, compare, upset, PosetRelation};
use paradox_core::records::{bound_chain, RecordKind};
use paradox_core::search::{census, Census, CoefficientTest};
use paradox_core::{Dyadic, Formalism, Natural, ParadoxHit};

use crate::hits::write_hits;
use crate::shard::{run_cst, run_records, run_search, SearchConfig};
use crate::tables::References;

/// `(j, q, N, N_odd, n_min, n_max, d_min, d_max)` for each row of the
/// shortcut census of `3..=10^6`.
pub const CENSUS_ROWS: [(u64, u64, u64, u64, u64, u64, i64, i64); 7] = [
    (8, 5, 5, 0, 7, 25, 1, 2),
    (27, 17, 50, 12, 164, 885, 1, 26),
    (46, 29, 231, 56, 91, 4611, 1, 188),
    (54, 34, 2, 0, 432, 864, 1, 2),
    (65, 41, 244, 62, 73, 4547, 7, 292),
    (73, 46, 56, 18, 487, 4614, 1, 63),
    (92, 58, 5, 0, 3567, 4551, 65, 125),
];

pub const CENSUS_HI: u64 = 1_000_000;
pub const NULL_WINDOW_LO: u64 = 4615;
pub const NULL_WINDOW_HI: u64 = 10_000_000;
pub const CST_HI: u64 = 1_150_000;

#[derive(Clone, Debug)]
pub struct PaperCheckOptions {
    pub threads: usize,
    pub budget: u64,
    /// Upper end of the empty window scan; the full figure is `10^7`.
    pub null_window_max: u64,
    pub refs: References,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn census_row_tuples(c: &Census) -> Vec<(u64, u64, u64, u64, u64, u64, i64, i64)> {
    c.rows
        .iter()
        .map(|r| {
            (
                r.j,
                r.q,
                r.count,
                r.count_odd,
                r.n_min.to_u64().unwrap_or(u64::MAX),
                r.n_max.to_u64().unwrap_or(u64::MAX),
                r.d_min.to_i64().unwrap_or(i64::MAX),
                r.d_max.to_i64().unwrap_or(i64::MAX),
            )
        })
        .collect()
}

fn csv_bytes(hits: &[ParadoxHit]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_hits(&mut buf, hits, &[])?;
    Ok(buf)
}

fn search(lo: u64, hi: u64, f: Formalism, opts: &PaperCheckOptions, threads: usize) -> Result<Vec<ParadoxHit>> {
    Ok(run_search(&SearchConfig::new(lo, hi, f, opts.budget), threads, None, None)?.hits)
}

/// Naive double loop over `n` and `j`: no early exit at 1, no pruning.
fn naive_hits(lo: u64, hi: u64, max_j: u64) -> BTreeSet<(u64, u64)> {
    let test = CoefficientTest::new(max_j as usize);
    let mut out = BTreeSet::new();
    for n in lo..=hi {
        let mut m = BigUint::from(n);
        let mut q = 0;
        for j in 1..=max_j {
            if m.bit(0) {
                q += 1;
                m = (m * 3u32 + 1u32) >> 1;
            } else {
                m >>= 1;
            }
            if m >= BigUint::from(n) && test.below_one(q, j) {
                out.insert((n, j));
            }
        }
    }
    out
}

fn remainder_extremes_hold(max_j: u32) -> bool {
    (1..=max_j).all(|j| {
        let modulus = 1u64 << j;
        let mut seen_lower = vec![false; j as usize + 1];
        let mut seen_upper = vec![false; j as usize + 1];
        for r in 0..modulus {
            let n = r + modulus;
            let q = parity_vector_u64(n, j as usize).expect("small").ones();
            let e = Dyadic::new(BigInt::from(shortcut_remainder_u128(n, j).expect("small")), j as u64);
            let b = remainder_bounds(j as u64, q as u64).expect("q <= j");
            if e < b.lower || e > b.upper {
                return false;
            }
            let lower_at = BigUint::from(r) == b.lower_class;
            let upper_at = BigUint::from(r) == b.upper_class;
            if (lower_at && e != b.lower) || (upper_at && e != b.upper) {
                return false;
            }
            seen_lower[q] |= lower_at;
            seen_upper[q] |= upper_at;
        }
        seen_lower.iter().chain(&seen_upper).all(|s| *s)
    })
}

fn poset_definitions_agree(max_j: usize) -> bool {
    (0..=max_j).all(|j| {
        (0..=j).all(|q| {
            let vectors = class(j, q);
            vectors.iter().all(|v| {
                let up = upset(v);
                vectors.iter().all(|w| {
                    let dominated = matches!(compare(v, w), PosetRelation::Less | PosetRelation::Equal);
                    dominated == up.contains(w)
                })
            })
        })
    })
}

fn linear_identity_holds() -> bool {
    (1..=50_000u64).all(|n| {
        [Formalism::Shortcut, Formalism::Classic].into_iter().all(|f| {
            let n = Natural::from(n);
            let j = (n.to_u64().unwrap_or(0) % 200 + 1) as usize;
            let t = trajectory(&n, j, f).expect("positive start");
            t.iterates.iter().zip(&t.forms).all(|(x, form)| form.holds(&n, x))
        })
    })
}

fn hit_bounds_hold(hits: &[ParadoxHit]) -> Result<bool> {
    for h in hits {
        let t = trajectory(&h.n, h.j as usize, h.formalism)?;
        let en = en_ratio_bounds(&t)?;
        if !h.verify() || !en.lower_holds || !en.upper_holds || !ones_ratio_window(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Board<'a> {
    out: &'a mut dyn Write,
    results: Vec<Criterion>,
}

impl Board<'_> {
    fn report(&mut self, id: u8, name: &'static str, passed: bool, detail: String) -> Result<()> {
        let mark = if passed { "PASS" } else { "FAIL" };
        writeln!(self.out, "[{mark}] {id:>2}. {name}: {detail}")?;
        self.out.flush()?;
        self.results.push(Criterion { id, name, passed, detail });
        Ok(())
    }
}

/// Runs every criterion, printing a line as each finishes.
pub fn run(opts: &PaperCheckOptions, out: &mut dyn Write) -> Result<Vec<Criterion>> {
    let mut board = Board { out, results: Vec::new() };

    let shortcut = search(3, CENSUS_HI, Formalism::Shortcut, opts, opts.threads)?;
    let sc = census(&shortcut)?;
    let rows = census_row_tuples(&sc);
    board.report(
        1,
        "shortcut census of 3..10^6",
        sc.summary.total == 593 && rows == CENSUS_ROWS,
        format!("{} hits in {} rows", sc.summary.total, rows.len()),
    )?;

    let s = &sc.summary;
    board.report(
        2,
        "census summary",
        s.near_cycles == 20 && s.even_even == 138 && s.distinct_starts == 550 && s.landmark_hits == s.total,
        format!(
            "{} near-cycles, {} even-even, {} distinct starts, {}/{} through 11 or 103",
            s.near_cycles, s.even_even, s.distinct_starts, s.landmark_hits, s.total
        ),
    )?;

    let classic = search(3, CENSUS_HI, Formalism::Classic, opts, opts.threads)?;
    let cc = census(&classic)?;
    let starts: BTreeSet<u64> = classic.iter().filter_map(|h| h.n.to_u64()).collect();
    let pairs: BTreeSet<(u64, u64)> = cc.rows.iter().map(|r| (r.j, r.q)).collect();
    let mut expected_pairs: BTreeSet<(u64, u64)> = CENSUS_ROWS.iter().map(|r| (r.0, r.1)).collect();
    expected_pairs.extend([(16, 10), (130, 82)]);
    let max_d = cc.summary.max_d.clone();
    let expected_max = (BigInt::from(584), Natural::from(8648u32), Natural::from(9232u32));
    board.report(
        3,
        "classic census of 3..10^6",
        cc.summary.total == 1541
            && starts.first() == Some(&7)
            && starts.last() == Some(&9229)
            && pairs == expected_pairs
            && cc.summary.near_cycles == 36
            && max_d.as_ref() == Some(&expected_max),
        format!(
            "{} hits, starts {}..{}, {} pairs, {} near-cycles, max d {}",
            cc.summary.total,
            starts.first().unwrap_or(&0),
            starts.last().unwrap_or(&0),
            pairs.len(),
            cc.summary.near_cycles,
            max_d.map(|(d, n, l)| format!("{d} ({n} -> {l})")).unwrap_or_default()
        ),
    )?;

    let window_hi = opts.null_window_max.min(NULL_WINDOW_HI).max(NULL_WINDOW_LO);
    let empty = search(NULL_WINDOW_LO, window_hi, Formalism::Shortcut, opts, opts.threads)?;
    board.report(
        4,
        "empty window",
        empty.is_empty(),
        format!("{} hits in {NULL_WINDOW_LO}..{window_hi}", empty.len()),
    )?;

    let cst = run_cst(2, CST_HI, opts.budget, opts.threads)?;
    board.report(
        5,
        "stopping time equals coefficient stopping time",
        cst.checked == CST_HI - 1 && cst.counterexamples.is_empty() && cst.max_gap == 0,
        format!("{} starts, {} counterexamples", cst.checked, cst.counterexamples.len()),
    )?;

    let chain = bound_chain(&opts.refs.excursions, &opts.refs.delays, &Natural::from(1_000_000_000u32))?;
    board.report(
        6,
        "bound chain",
        chain.m0 == Natural::from(113_383u32)
            && chain.j0 == 1539
            && chain.q0 == 971
            && chain.j0_plus_q0() == 2510
            && chain.m1 == Natural::from(23_035_537_407u64)
            && chain.j1 == 301_994,
        format!(
            "m0 = {}, j0 = {}, q0 = {}, j0 + q0 = {}, m1 = {}, j1 = {}",
            chain.m0,
            chain.j0,
            chain.q0,
            chain.j0_plus_q0(),
            chain.m1,
            chain.j1
        ),
    )?;

    let excursions = run_records(CENSUS_HI, RecordKind::MaxExcursionT, opts.budget, opts.threads)?;
    let delays = run_records(CENSUS_HI, RecordKind::DelayCol, opts.budget, opts.threads)?;
    let hi = BigUint::from(CENSUS_HI);
    let matched_e = opts.refs.excursions.check_prefix(&excursions, &hi);
    let matched_d = opts.refs.delays.check_prefix(&delays, &hi);
    let billion = Natural::from(1_000_000_000u32);
    let first = excursions.iter().find(|e| e.value >= billion).map(|e| e.n.clone());
    board.report(
        7,
        "record prefixes to 10^6",
        matched_e.is_ok() && matched_d.is_ok() && first == Some(Natural::from(113_383u32)),
        format!(
            "excursion {:?}, delay {:?}, first excursion >= 10^9 at {}",
            matched_e.map_err(|e| e.to_string()),
            matched_d.map_err(|e| e.to_string()),
            first.map(|n| n.to_string()).unwrap_or_else(|| "none".into())
        ),
    )?;

    let naive = naive_hits(3, 5000, 100);
    let scanned: BTreeSet<(u64, u64)> =
        shortcut.iter().filter(|h| h.j <= 100 && h.n <= Natural::from(5000u32)).filter_map(|h| Some((h.n.to_u64()?, h.j))).collect();
    let monotone = (1..=10).all(|j| check_remainder_monotonicity(j).is_ok_and(|v| v.is_empty()));
    let means = (1..=18u32).all(|j| mean_remainder_check(j).ok() == Some(BigRational::new(j.into(), 4.into())));
    let checks = [
        ("linear identity", linear_identity_holds()),
        ("remainder monotonicity", monotone),
        ("remainder extremes", remainder_extremes_hold(14)),
        ("mean remainder", means),
        ("order definitions", poset_definitions_agree(10)),
        ("hit bounds", hit_bounds_hold(&shortcut)? && hit_bounds_hold(&classic)?),
        ("naive oracle", naive == scanned),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    board.report(
        8,
        "invariants",
        failed.is_empty(),
        if failed.is_empty() { format!("{} suites hold", checks.len()) } else { format!("failed: {}", failed.join(", ")) },
    )?;

    let listed: Vec<String> = convergents(7)?.iter().map(|c| format!("{}/{}", c.p, c.q)).collect();
    let expected: Vec<&str> = vec!["0/1", "1/1", "1/2", "2/3", "5/8", "12/19", "41/65"];
    let cap = heuristic_j_cap(&BigRational::from_integer(42.into()), &BigRational::from_integer(3.into()))?;
    let mut rhin = true;
    for (j, q, ..) in CENSUS_ROWS {
        rhin &= rhin_gap_ok(j, q)?;
    }
    board.report(
        9,
        "diophantine values",
        listed == expected && cap == Some(17_396) && rhin,
        format!("convergents {}, heuristic cap {:?}, gap bound {}", listed.join(" "), cap, rhin),
    )?;

    let mut identical = true;
    for (f, reference) in [(Formalism::Shortcut, &shortcut), (Formalism::Classic, &classic)] {
        let reference = csv_bytes(reference)?;
        for threads in [1, 4, 8] {
            identical &= csv_bytes(&search(3, CENSUS_HI, f, opts, threads)?)? == reference;
        }
        let dir = std::env::temp_dir().join(format!("paradox-check-{}", std::process::id()));
        std::fs::create_dir_all(&dir)?;
        let path: PathBuf = dir.join(format!("{f}.checkpoint"));
        let _ = std::fs::remove_file(&path);
        let cfg = SearchConfig::new(3, CENSUS_HI, f, opts.budget);
        let first = run_search(&cfg, opts.threads, Some(&path), Some(3))?;
        let resumed = run_search(&cfg, opts.threads, Some(&path), None)?;
        identical &= !first.complete && resumed.complete && csv_bytes(&resumed.hits)? == reference;
        let _ = std::fs::remove_dir_all(&dir);
    }
    board.report(
        10,
        "determinism",
        identical,
        "hit tables at 1, 4 and 8 threads and across a checkpoint resume".to_string(),
    )?;

    let passed = board.results.iter().filter(|c| c.passed).count();
    writeln!(board.out, "{passed}/{} criteria passed", board.results.len())?;
    Ok(board.results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_search_agrees_on_a_small_range() {
        let scanned: BTreeSet<(u64, u64)> = search(
            3,
            300,
            Formalism::Shortcut,
            &PaperCheckOptions { threads: 1, budget: 10_000, null_window_max: 0, refs: References::builtin().unwrap() },
            1,
        )
        .unwrap()
        .iter()
        .filter(|h| h.j <= 100)
        .map(|h| (h.n.to_u64().unwrap(), h.j))
        .collect();
        assert_eq!(naive_hits(3, 300, 100), scanned);
    }

    #[test]
    fn exhaustive_helpers_hold_at_small_sizes() {
        assert!(remainder_extremes_hold(8));
        assert!(poset_definitions_agree(6));
    }

}
