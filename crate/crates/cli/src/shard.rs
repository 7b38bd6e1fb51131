//! Block-parallel execution with an in-order collector.
//!
//! A range is cut into fixed-size blocks. Workers claim block indices from a
//! shared counter and send finished blocks to the collector, which commits
//! them strictly in index order. Whatever the thread count, the committed
//! sequence — and therefore every output and checkpoint — is the same.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use anyhow::{bail, Result};
use paradox_core::records::{records_in, RecordEntry, RecordKind};
use paradox_core::search::{verify_cst, CstReport, Kernel};
use paradox_core::{Formalism, Natural, ParadoxHit};
use sha2::{Digest, Sha256};

use crate::checkpoint::Checkpoint;

pub const DEFAULT_BLOCK: u64 = 1 << 16;

/// Runs `work` on blocks `first..count` using `threads` workers and hands
/// the results to `commit` in block order. `commit` returns `false` to stop
/// early. Returns the index of the first block not committed.
pub fn run_blocks<T, W, C>(first: u64, count: u64, threads: usize, work: W, mut commit: C) -> Result<u64>
where
    T: Send,
    W: Fn(u64) -> Result<T> + Sync,
    C: FnMut(u64, T) -> Result<bool>,
{
    if first >= count {
        return Ok(first);
    }
    let next = AtomicU64::new(first);
    let stop = AtomicBool::new(false);
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(u64, Result<T>)>();
        for _ in 0..threads.max(1) {
            let tx = tx.clone();
            let (next, stop, work) = (&next, &stop, &work);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count || tx.send((i, work(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut expected = first;
        let outcome = 'collect: {
            for (i, result) in rx.iter() {
                pending.insert(i, result);
                while let Some(result) = pending.remove(&expected) {
                    let keep_going = match result {
                        Ok(value) => commit(expected, value),
                        Err(e) => Err(e),
                    };
                    match keep_going {
                        Ok(true) => expected += 1,
                        Ok(false) => {
                            expected += 1;
                            break 'collect Ok(expected);
                        }
                        Err(e) => break 'collect Err(e),
                    }
                }
                if expected == count {
                    break;
                }
            }
            Ok(expected)
        };
        stop.store(true, Ordering::Relaxed);
        outcome
    })
}

/// Everything that determines a search's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub lo: u64,
    pub hi: u64,
    pub formalism: Formalism,
    pub budget: u64,
    pub block: u64,
}

impl SearchConfig {
    pub fn new(lo: u64, hi: u64, formalism: Formalism, budget: u64) -> Self {
        SearchConfig { lo, hi, formalism, budget, block: DEFAULT_BLOCK }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo < 3 {
            bail!("search ranges start at 3 or later; n = 1 and 2 are classified analytically by `bounds classify`");
        }
        if self.lo > self.hi {
            bail!("empty range {}..{}", self.lo, self.hi);
        }
        if self.block == 0 {
            bail!("block size must be positive");
        }
        Ok(())
    }

    pub fn block_count(&self) -> u64 {
        (self.hi - self.lo) / self.block + 1
    }

    /// Inclusive bounds of block `i`.
    pub fn block_range(&self, i: u64) -> (u64, u64) {
        let lo = self.lo + i * self.block;
        (lo, (lo + self.block - 1).min(self.hi))
    }

    /// Hex SHA-256 of the canonical field listing; ties a checkpoint to the
    /// search it belongs to.
    pub fn hash(&self) -> String {
        let text = format!(
            "lo={};hi={};formalism={};budget={};block={}",
            self.lo, self.hi, self.formalism, self.budget, self.block
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub hits: Vec<ParadoxHit>,
    /// First block not yet scanned.
    pub next_block: u64,
    pub complete: bool,
}

/// Scans `cfg` with `threads` workers. With a checkpoint path, progress is
/// resumed from and saved to that file after every block. `stop_after`
/// limits the number of blocks committed in this call.
pub fn run_search(
    cfg: &SearchConfig,
    threads: usize,
    checkpoint: Option<&Path>,
    stop_after: Option<u64>,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut state = match checkpoint {
        Some(path) if path.exists() => {
            let saved = Checkpoint::load(path)?;
            if saved.config != *cfg {
                bail!("checkpoint {} belongs to a different search", path.display());
            }
            saved
        }
        _ => Checkpoint { config: cfg.clone(), next_block: 0, hits: Vec::new() },
    };
    let kernel = Kernel::new(cfg.formalism, cfg.budget);
    let count = cfg.block_count();
    let mut committed = 0u64;
    let next = run_blocks(
        state.next_block,
        count,
        threads,
        |i| {
            let (lo, hi) = cfg.block_range(i);
            Ok(kernel.scan_range(lo, hi)?)
        },
        |i, hits| {
            state.hits.extend(hits);
            state.next_block = i + 1;
            if let Some(path) = checkpoint {
                state.store(path)?;
            }
            committed += 1;
            Ok(stop_after.map_or(true, |limit| committed < limit))
        },
    )?;
    Ok(SearchOutcome { complete: next == count, next_block: next, hits: state.hits })
}

/// Parallel CST check over `lo..=hi`.
pub fn run_cst(lo: u64, hi: u64, budget: u64, threads: usize) -> Result<CstReport> {
    if lo < 2 || lo > hi {
        bail!("CST ranges must satisfy 2 <= lo <= hi");
    }
    let blocks = (hi - lo) / DEFAULT_BLOCK + 1;
    let mut report = CstReport::default();
    run_blocks(
        0,
        blocks,
        threads,
        |i| {
            let a = lo + i * DEFAULT_BLOCK;
            Ok(verify_cst(a, (a + DEFAULT_BLOCK - 1).min(hi), budget)?)
        },
        |_, part| {
            report.merge(part);
            Ok(true)
        },
    )?;
    Ok(report)
}

/// Record holders in `1..=hi`, computed block-parallel. Each block reports
/// its local records; the collector keeps those beating the running best.
pub fn run_records(hi: u64, kind: RecordKind, budget: u64, threads: usize) -> Result<Vec<RecordEntry>> {
    if hi == 0 {
        return Ok(Vec::new());
    }
    let blocks = (hi - 1) / DEFAULT_BLOCK + 1;
    let mut out: Vec<RecordEntry> = Vec::new();
    run_blocks(
        0,
        blocks,
        threads,
        |i| {
            let a = 1 + i * DEFAULT_BLOCK;
            Ok(records_in(a, (a + DEFAULT_BLOCK - 1).min(hi), kind, budget, None)?)
        },
        |_, local| {
            for entry in local {
                if out.last().map_or(true, |best| entry.value > best.value) {
                    out.push(entry);
                }
            }
            Ok(true)
        },
    )?;
    Ok(out)
}

/// Convenience for callers holding a `Natural` bound.
pub fn to_u64(n: &Natural) -> Result<u64> {
    u64::try_from(n).map_err(|_| anyhow::anyhow!("{n} does not fit in 64 bits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collector_commits_in_order() {
        for threads in [1, 3, 8] {
            let mut seen = Vec::new();
            let next = run_blocks(2, 40, threads, |i| Ok(i * i), |i, v| {
                seen.push((i, v));
                Ok(true)
            })
            .unwrap();
            assert_eq!(next, 40);
            assert_eq!(seen, (2..40).map(|i| (i, i * i)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn collector_stops_and_propagates_errors() {
        let next = run_blocks(0, 100, 4, |i| Ok(i), |i, _| Ok(i < 9)).unwrap();
        assert_eq!(next, 10);
        let err = run_blocks(0, 100, 4, |i| if i == 5 { bail!("boom") } else { Ok(i) }, |_, _| Ok(true));
        assert!(err.is_err());
    }

    #[test]
    fn blocks_tile_the_range() {
        let cfg = SearchConfig { block: 7, ..SearchConfig::new(3, 50, Formalism::Shortcut, 1000) };
        let mut covered = Vec::new();
        for i in 0..cfg.block_count() {
            let (a, b) = cfg.block_range(i);
            covered.extend(a..=b);
        }
        assert_eq!(covered, (3..=50).collect::<Vec<_>>());
        assert_ne!(cfg.hash(), SearchConfig { budget: 999, ..cfg.clone() }.hash());
    }

    #[test]
    fn parallel_records_match_serial() {
        let serial = paradox_core::records::compute_records(20_000, RecordKind::DelayCol, 10_000).unwrap();
        assert_eq!(run_records(20_000, RecordKind::DelayCol, 10_000, 3).unwrap(), serial);
    }
}
