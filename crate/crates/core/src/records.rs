//! Record tables (delay and maximum-excursion record holders), their text
//! format, and the chain of bounds that turns them into a limit on the length
//! of any paradoxical sequence.
//!
//! A table is plain text: `#` starts a comment, data lines are
//! `start value` in decimal with both columns strictly increasing. Lines of
//! the form `#! key args` carry metadata:
//!
//! * `#! kind delay-col` (or `delay-t`, `max-excursion-t`)
//! * `#! complete-through N`: every record holder `<= N` is listed
//! * `#! record-above V N`: the next record, of value `V`, is held by a start
//!   greater than `N` whose exact value is not part of the table

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::bounds::{harmonic_exponent_ceiling, smallest_j_with_harmonic_cap};
use crate::dynamics::{Formalism, Natural};
use crate::search::orbit;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    /// Steps of the shortcut map to reach 1.
    DelayT,
    /// Steps of the classic map to reach 1.
    DelayCol,
    /// Largest term under the shortcut map.
    MaxExcursionT,
}

impl RecordKind {
    pub const ALL: [RecordKind; 3] = [RecordKind::DelayT, RecordKind::DelayCol, RecordKind::MaxExcursionT];

    pub fn name(self) -> &'static str {
        match self {
            RecordKind::DelayT => "delay-t",
            RecordKind::DelayCol => "delay-col",
            RecordKind::MaxExcursionT => "max-excursion-t",
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecordKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RecordKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown record kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RecordEntry {
    pub n: Natural,
    pub value: Natural,
}

/// The quantity a record table ranks starts by.
pub fn record_value(n: &Natural, kind: RecordKind, budget: u64) -> Result<Natural> {
    Ok(match kind {
        RecordKind::DelayT => orbit(n, Formalism::Shortcut, budget)?.delay.into(),
        RecordKind::DelayCol => orbit(n, Formalism::Classic, budget)?.delay.into(),
        RecordKind::MaxExcursionT => orbit(n, Formalism::Shortcut, budget)?.max,
    })
}

/// Record holders among `lo..=hi`, given the best value seen below `lo`.
pub fn records_in(lo: u64, hi: u64, kind: RecordKind, budget: u64, best: Option<Natural>) -> Result<Vec<RecordEntry>> {
    let mut best = best;
    let mut out = Vec::new();
    for n in lo.max(1)..=hi {
        let n = Natural::from(n);
        let value = record_value(&n, kind, budget)?;
        if best.as_ref().map_or(true, |b| value > *b) {
            best = Some(value.clone());
            out.push(RecordEntry { n, value });
        }
    }
    Ok(out)
}

/// Record holders in `1..=n_hi`.
pub fn compute_records(n_hi: u64, kind: RecordKind, budget: u64) -> Result<Vec<RecordEntry>> {
    records_in(1, n_hi, kind, budget, None)
}

/// A record value known to be attained only beyond the listed range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordBound {
    pub value: Natural,
    /// The holder is strictly greater than this.
    pub start_above: Natural,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordTable {
    pub kind: Option<RecordKind>,
    pub entries: Vec<RecordEntry>,
    pub complete_through: Option<Natural>,
    pub bounds: Vec<RecordBound>,
}

fn parse_natural(token: &str, line: usize) -> Result<Natural> {
    BigUint::parse_bytes(token.as_bytes(), 10)
        .ok_or_else(|| Error::MalformedLine { line, detail: alloc::format!("not a decimal integer: {token:?}") })
}

impl RecordTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = RecordTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if let Some(directive) = trimmed.strip_prefix("#!") {
                table.directive(directive, line)?;
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let [n, value] = fields[..] else {
                return Err(Error::MalformedLine { line, detail: "expected two columns".into() });
            };
            let entry = RecordEntry { n: parse_natural(n, line)?, value: parse_natural(value, line)? };
            if let Some(prev) = table.entries.last() {
                if entry.n <= prev.n || entry.value <= prev.value {
                    return Err(Error::MalformedLine { line, detail: "columns must increase strictly".into() });
                }
            }
            table.entries.push(entry);
        }
        Ok(table)
    }

    fn directive(&mut self, text: &str, line: usize) -> Result<()> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields[..] {
            ["kind", kind] => {
                self.kind = Some(kind.parse().map_err(|_| Error::MalformedLine {
                    line,
                    detail: alloc::format!("unknown record kind {kind:?}"),
                })?)
            }
            ["complete-through", n] => self.complete_through = Some(parse_natural(n, line)?),
            ["record-above", value, n] => self.bounds.push(RecordBound {
                value: parse_natural(value, line)?,
                start_above: parse_natural(n, line)?,
            }),
            _ => return Err(Error::MalformedLine { line, detail: alloc::format!("unknown directive {:?}", text.trim()) }),
        }
        Ok(())
    }

    /// Largest start up to which the table lists every record holder.
    pub fn coverage(&self) -> Natural {
        let last = self.entries.last().map(|e| e.n.clone()).unwrap_or_default();
        let declared = self.complete_through.clone().unwrap_or_default();
        let bounded = self.bounds.iter().map(|b| b.start_above.clone()).max().unwrap_or_default();
        last.max(declared).max(bounded)
    }

    /// Checks that `computed`, the record holders of `1..=n_hi`, is exactly
    /// the table's prefix up to `n_hi`. Returns the number of entries
    /// compared.
    pub fn check_prefix(&self, computed: &[RecordEntry], n_hi: &Natural) -> Result<usize> {
        if self.coverage() < *n_hi {
            return Err(Error::MissingCoverage(alloc::format!("starts up to {n_hi}")));
        }
        let expected: Vec<&RecordEntry> = self.entries.iter().take_while(|e| e.n <= *n_hi).collect();
        let actual: Vec<&RecordEntry> = computed.iter().take_while(|e| e.n <= *n_hi).collect();
        for (index, pair) in expected.iter().zip(&actual).enumerate() {
            if pair.0 != pair.1 {
                return Err(Error::RecordMismatch {
                    index,
                    detail: alloc::format!("table has {} {}, computed {} {}", pair.0.n, pair.0.value, pair.1.n, pair.1.value),
                });
            }
        }
        if expected.len() != actual.len() {
            return Err(Error::RecordMismatch {
                index: expected.len().min(actual.len()),
                detail: alloc::format!("table lists {} holders, computed {}", expected.len(), actual.len()),
            });
        }
        Ok(expected.len())
    }

    /// Smallest start whose value reaches `threshold`; it is always a record
    /// holder.
    pub fn first_reaching(&self, threshold: &Natural) -> Result<&RecordEntry> {
        self.entries
            .iter()
            .find(|e| e.value >= *threshold)
            .ok_or_else(|| Error::MissingCoverage(alloc::format!("a value of at least {threshold}")))
    }

    /// Largest record value known, with a start below which every value is
    /// smaller than or equal to it.
    pub fn highest_record(&self) -> Option<(Natural, Natural)> {
        let listed = self.entries.last().map(|e| (e.value.clone(), self.coverage()));
        let bounded = self.bounds.iter().max_by_key(|b| &b.value).map(|b| (b.value.clone(), b.start_above.clone()));
        match (listed, bounded) {
            (Some(a), Some(b)) => Some(if b.0 > a.0 { b } else { a }),
            (a, b) => a.or(b),
        }
    }

    /// Serialises entries and metadata in the format [`RecordTable::parse`]
    /// reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(kind) = self.kind {
            out.push_str(&alloc::format!("#! kind {kind}\n"));
        }
        if let Some(n) = &self.complete_through {
            out.push_str(&alloc::format!("#! complete-through {n}\n"));
        }
        for b in &self.bounds {
            out.push_str(&alloc::format!("#! record-above {} {}\n", b.value, b.start_above));
        }
        for e in &self.entries {
            out.push_str(&e.n.to_string());
            out.push(' ');
            out.push_str(&e.value.to_string());
            out.push('\n');
        }
        out
    }
}

/// Every number of the argument bounding the length of paradoxical
/// sequences, recomputed from the tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundChain {
    pub n0: Natural,
    /// Smallest start whose excursion reaches `n0`.
    pub m0: Natural,
    /// Smallest `j > 1` for which odd terms of harmonic mean `m0` are possible.
    pub j0: u64,
    /// Smallest `q` with `(3 m0 + 1)^q >= 2^j0 m0^q`.
    pub q0: u64,
    /// Highest known classic delay record.
    pub delay_record: Natural,
    /// Every start up to `n1` has classic delay at most `delay_record`.
    pub n1: Natural,
    /// `n1` is a lower bound on the record holder rather than the holder.
    pub n1_is_lower_bound: bool,
    pub m1: Natural,
    pub j1: u64,
}

impl BoundChain {
    pub fn j0_plus_q0(&self) -> u64 {
        self.j0 + self.q0
    }

    /// Largest length a further paradoxical sequence could have.
    pub fn max_length(&self) -> u64 {
        self.j1 - 1
    }
}

/// Search limit for the final harmonic scan.
pub const CHAIN_SCAN_LIMIT: u64 = 4_000_000;

/// From `n0`: `m0` by lookup, `j0` and `q0` from the harmonic cap, the
/// requirement `j0 + q0` exceeding every known delay record up to `n1`, then
/// `m1` by lookup and `j1` from the harmonic cap again.
pub fn bound_chain(excursions: &RecordTable, delays: &RecordTable, n0: &Natural) -> Result<BoundChain> {
    if n0.is_zero() {
        return Err(Error::InvalidParameter("n0 must be positive".into()));
    }
    let m0 = excursions.first_reaching(n0)?.n.clone();
    let j0 = smallest_j_with_harmonic_cap(&m0, 2, CHAIN_SCAN_LIMIT)?
        .ok_or_else(|| Error::MissingCoverage(alloc::format!("harmonic cap for {m0} below {CHAIN_SCAN_LIMIT}")))?;
    let q0 = harmonic_exponent_ceiling(j0, &m0)?;
    let (delay_record, n1) =
        delays.highest_record().ok_or_else(|| Error::MissingCoverage("classic delay records".into()))?;
    if delay_record.to_u64().map_or(true, |d| d >= j0 + q0) {
        return Err(Error::MissingCoverage(alloc::format!(
            "delay record {delay_record} does not stay below j0 + q0 = {}",
            j0 + q0
        )));
    }
    let n1_is_lower_bound = delays.bounds.iter().any(|b| b.value == delay_record && b.start_above == n1);
    let m1 = excursions.first_reaching(&n1)?.n.clone();
    let j1 = smallest_j_with_harmonic_cap(&m1, 2, CHAIN_SCAN_LIMIT)?
        .ok_or_else(|| Error::MissingCoverage(alloc::format!("harmonic cap for {m1} below {CHAIN_SCAN_LIMIT}")))?;
    Ok(BoundChain { n0: n0.clone(), m0, j0, q0, delay_record, n1, n1_is_lower_bound, m1, j1 })
}
