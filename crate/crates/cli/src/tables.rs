//! Reference record tables: the copies shipped in `data/`, or a directory
//! given with `--refs` holding files of the same names.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use paradox_core::records::{RecordKind, RecordTable};

pub const EXCURSION_FILE: &str = "max_excursion_t.txt";
pub const DELAY_FILE: &str = "delay_col.txt";

const BUILTIN_EXCURSIONS: &str = include_str!("../data/max_excursion_t.txt");
const BUILTIN_DELAYS: &str = include_str!("../data/delay_col.txt");

#[derive(Clone, Debug)]
pub struct References {
    pub excursions: RecordTable,
    pub delays: RecordTable,
}

fn parse(text: &str, kind: RecordKind, name: &str) -> Result<RecordTable> {
    let table = RecordTable::parse(text).with_context(|| format!("parsing {name}"))?;
    match table.kind {
        Some(k) if k == kind => Ok(table),
        Some(k) => bail!("{name} holds {k} records, expected {kind}"),
        None => bail!("{name} lacks a `#! kind {kind}` line"),
    }
}

impl References {
    pub fn builtin() -> Result<Self> {
        Ok(References {
            excursions: parse(BUILTIN_EXCURSIONS, RecordKind::MaxExcursionT, EXCURSION_FILE)?,
            delays: parse(BUILTIN_DELAYS, RecordKind::DelayCol, DELAY_FILE)?,
        })
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
        };
        Ok(References {
            excursions: parse(&read(EXCURSION_FILE)?, RecordKind::MaxExcursionT, EXCURSION_FILE)?,
            delays: parse(&read(DELAY_FILE)?, RecordKind::DelayCol, DELAY_FILE)?,
        })
    }

    pub fn load(dir: Option<&Path>) -> Result<Self> {
        dir.map_or_else(References::builtin, References::from_dir)
    }

    pub fn table(&self, kind: RecordKind) -> Option<&RecordTable> {
        match kind {
            RecordKind::MaxExcursionT => Some(&self.excursions),
            RecordKind::DelayCol => Some(&self.delays),
            RecordKind::DelayT => None,
        }
    }
}
