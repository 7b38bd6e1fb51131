//! The subcommands, writing human-readable output to any sink. Each returns
//! `Ok(true)` when every requested check passed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use paradox_core::bounds::{mean_remainder_check, remainder_bounds, small_j_classification};
use paradox_core::dyadic::truncated_decimal;
use paradox_core::numtheory::{approx_pairs, convergents, heuristic_j_cap, partial_quotients, rhin_gap_ok, Side};
use paradox_core::poset::{compare, hasse_with_cap, PosetRelation};
use paradox_core::records::{bound_chain, RecordKind, RecordTable};
use paradox_core::search::census;
use paradox_core::{Error, Natural, ParadoxHit};

use crate::dot::hasse_dot;
use crate::hits::{read_hits, write_hits};
use crate::report::{render_census, summary_line, write_census_csv};
use crate::shard::{run_cst, run_records, run_search, SearchConfig};
use crate::tables::References;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn timestamp_line() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    format!("generated at unix time {secs}")
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub config: SearchConfig,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub census_out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub timestamp: bool,
    pub decimals: usize,
    /// Stop after this many blocks (resume later from the checkpoint).
    pub stop_after: Option<u64>,
}

pub fn search(opts: &SearchOptions, out: &mut dyn Write) -> Result<bool> {
    let cfg = &opts.config;
    let outcome = run_search(cfg, opts.threads, opts.checkpoint.as_deref(), opts.stop_after)?;
    if !outcome.complete {
        writeln!(
            out,
            "stopped after block {} of {}; rerun with the same --checkpoint to resume",
            outcome.next_block,
            cfg.block_count()
        )?;
        return Ok(true);
    }
    let unsound: Vec<&ParadoxHit> = outcome.hits.iter().filter(|h| !h.verify()).collect();
    if let Some(h) = unsound.first() {
        bail!("hit for n = {} at j = {} failed re-verification", h.n, h.j);
    }
    let c = census(&outcome.hits)?;
    if let Some(path) = &opts.out {
        let mut preamble = vec![format!(
            "{} search over {}..{} with step budget {}",
            cfg.formalism, cfg.lo, cfg.hi, cfg.budget
        )];
        if opts.timestamp {
            preamble.push(timestamp_line());
        }
        write_hits(create(path)?, &outcome.hits, &preamble)?;
    }
    if let Some(path) = &opts.census_out {
        write_census_csv(create(path)?, &c)?;
    }
    write!(out, "{}", render_census(&c, opts.decimals))?;
    writeln!(out, "{}", summary_line(&c))?;
    Ok(true)
}

pub fn cst(lo: u64, hi: u64, budget: u64, threads: usize, out: &mut dyn Write) -> Result<bool> {
    let report = run_cst(lo, hi, budget, threads)?;
    writeln!(
        out,
        "checked {} starts in {lo}..{hi}: {} counterexamples, max t - tau = {}",
        report.checked,
        report.counterexamples.len(),
        report.max_gap
    )?;
    for (n, t, tau) in &report.counterexamples {
        writeln!(out, "counterexample: n = {n}, t = {t}, tau = {tau}")?;
    }
    Ok(report.counterexamples.is_empty())
}

pub fn poset(j: usize, q: usize, cap: u64, dot_out: Option<&Path>, out: &mut dyn Write) -> Result<bool> {
    let h = hasse_with_cap(j, q, cap)?;
    let dot = hasse_dot(&h);
    match dot_out {
        Some(path) => create(path)?.write_all(dot.as_bytes())?,
        None => out.write_all(dot.as_bytes())?,
    }
    writeln!(out, "{} nodes, {} edges", h.nodes.len(), h.edges.len())?;
    writeln!(
        out,
        "minimum {}, maximum {}",
        h.nodes[h.sources()[0]],
        h.nodes[h.sinks()[0]]
    )?;
    for v in &h.nodes {
        let apart: Vec<String> = h
            .nodes
            .iter()
            .filter(|w| compare(v, w) == PosetRelation::Incomparable)
            .map(ToString::to_string)
            .collect();
        if !apart.is_empty() {
            writeln!(out, "{v} is incomparable with {}: {}", apart.len(), apart.join(" "))?;
        }
    }
    Ok(h.is_acyclic())
}

#[derive(Clone, Debug)]
pub enum BoundsQuery {
    Chain { n0: Natural },
    Heuristic { alpha: BigRational, beta: BigRational },
    Convergents { count: usize },
    Rhin { j: u64, q: u64 },
    Mean { j: u32 },
    Extremes { j: u64, q: u64 },
    Classify { j: u64 },
    Pairs { eps: BigRational, count: usize },
}

fn show_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn bounds(query: &BoundsQuery, refs: &References, out: &mut dyn Write) -> Result<bool> {
    match query {
        BoundsQuery::Chain { n0 } => {
            let c = bound_chain(&refs.excursions, &refs.delays, n0)?;
            writeln!(out, "n0 = {}", c.n0)?;
            writeln!(out, "m0 = {}  (smallest start with excursion >= n0)", c.m0)?;
            writeln!(out, "j0 = {}  (smallest length admitting harmonic mean m0)", c.j0)?;
            writeln!(out, "q0 = {}", c.q0)?;
            writeln!(out, "j0 + q0 = {}  (exceeds delay record {})", c.j0_plus_q0(), c.delay_record)?;
            let qualifier = if c.n1_is_lower_bound { " (lower bound for the record holder)" } else { "" };
            writeln!(out, "n1 = {}{qualifier}", c.n1)?;
            writeln!(out, "m1 = {}  (smallest start with excursion >= n1)", c.m1)?;
            writeln!(out, "j1 = {}", c.j1)?;
            writeln!(out, "any further paradoxical sequence has length at most {}", c.max_length())?;
        }
        BoundsQuery::Heuristic { alpha, beta } => match heuristic_j_cap(alpha, beta)? {
            Some(cap) => writeln!(out, "cap = {cap} (j < {})", cap + 1)?,
            None => writeln!(out, "no length satisfies the heuristic inequality")?,
        },
        BoundsQuery::Convergents { count } => {
            let quotients = partial_quotients(*count)?;
            for (c, a) in convergents(*count)?.iter().zip(&quotients) {
                let side = match c.side {
                    Side::Below => "below",
                    Side::Above => "above",
                };
                writeln!(out, "{:>3}  a = {:<6} {}/{}  ({side})", c.index, a, c.p, c.q)?;
            }
        }
        BoundsQuery::Rhin { j, q } => {
            let ok = rhin_gap_ok(*j, *q)?;
            writeln!(out, "|{j} log 2 - {q} log 3| >= max({j}, {q})^-13.3: {ok}")?;
            return Ok(ok);
        }
        BoundsQuery::Mean { j } => {
            let mean = mean_remainder_check(*j)?;
            let expected = BigRational::new((*j).into(), 4.into());
            writeln!(out, "mean of E_{j}(n) over n = 1..2^{j}: {} (j/4 = {})", show_rational(&mean), show_rational(&expected))?;
            return Ok(mean == expected);
        }
        BoundsQuery::Extremes { j, q } => {
            let b = remainder_bounds(*j, *q)?;
            writeln!(out, "lower = {} ~ {}  attained on n = {} mod 2^{j}", b.lower, truncated_decimal(&b.lower.to_rational(), 6), b.lower_class)?;
            writeln!(out, "upper = {} ~ {}  attained on n = {} mod 2^{j}", b.upper, truncated_decimal(&b.upper.to_rational(), 6), b.upper_class)?;
        }
        BoundsQuery::Classify { j } => match small_j_classification(*j) {
            Ok(starts) => {
                let list: Vec<String> = starts.iter().map(ToString::to_string).collect();
                writeln!(out, "paradoxical starts of length {j}: {{{}}}", list.join(", "))?;
            }
            Err(Error::UnsupportedLength(_)) => {
                writeln!(out, "length {j} is not settled by the harmonic cap")?;
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        },
        BoundsQuery::Pairs { eps, count } => {
            for p in approx_pairs(eps, *count)? {
                writeln!(out, "({}, {})", p.a, p.b)?;
            }
        }
    }
    Ok(true)
}

/// Computes record holders in `1..=hi`, prints them and compares them with
/// the reference table of the same kind, if any.
pub fn records(
    kind: RecordKind,
    hi: u64,
    budget: u64,
    threads: usize,
    refs: &References,
    table_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let computed = run_records(hi, kind, budget, threads)?;
    for e in &computed {
        writeln!(out, "{} {}", e.n, e.value)?;
    }
    writeln!(out, "{} {kind} record holders up to {hi}", computed.len())?;
    if let Some(path) = table_out {
        let table = RecordTable {
            kind: Some(kind),
            entries: computed.clone(),
            complete_through: Some(BigUint::from(hi)),
            bounds: Vec::new(),
        };
        create(path)?.write_all(table.to_text().as_bytes())?;
    }
    let Some(reference) = refs.table(kind) else {
        writeln!(out, "no reference table for {kind}")?;
        return Ok(true);
    };
    match reference.check_prefix(&computed, &BigUint::from(hi)) {
        Ok(n) => {
            writeln!(out, "matches the reference table prefix ({n} entries)")?;
            Ok(true)
        }
        Err(e) => {
            writeln!(out, "reference mismatch: {e}")?;
            Ok(false)
        }
    }
}

/// Re-verifies every row of a hit table from scratch.
pub fn check_hits(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let hits = read_hits(file)?;
    let bad: Vec<&ParadoxHit> = hits.iter().filter(|h| !h.verify()).collect();
    for h in &bad {
        writeln!(out, "does not verify: n = {}, j = {}", h.n, h.j)?;
    }
    writeln!(out, "{} hits read, {} verified", hits.len(), hits.len() - bad.len())?;
    Ok(bad.is_empty())
}

/// Helper for callers holding a count that must fit a `usize`.
pub fn to_usize(n: u64) -> Result<usize> {
    n.to_usize().context("value too large")
}
