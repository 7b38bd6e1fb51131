//! Search checkpoints.
//!
//! A checkpoint is a UTF-8 text file of `key = value` lines; `#` starts a
//! comment. Keys, in the order written:
//!
//! ```text
//! version    = 1
//! config     = <hex SHA-256 of the search configuration>
//! lo, hi     = inclusive start range
//! formalism  = shortcut | classic
//! budget     = step budget per start
//! block      = starts per block
//! next_block = first block not yet scanned
//! hits       = number of `hit` lines that follow
//! hit        = one CSV row in the hit-table column order (repeated)
//! ```
//!
//! The file is replaced atomically: it is written to `<path>.tmp`, synced,
//! and renamed over the old one.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use paradox_core::ParadoxHit;

use crate::hits::{hit_fields, parse_hit};
use crate::shard::SearchConfig;

const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub config: SearchConfig,
    pub next_block: u64,
    pub hits: Vec<ParadoxHit>,
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".tmp");
    PathBuf::from(name)
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# paradox search checkpoint");
        let _ = writeln!(s, "version = {VERSION}");
        let _ = writeln!(s, "config = {}", c.hash());
        let _ = writeln!(s, "lo = {}", c.lo);
        let _ = writeln!(s, "hi = {}", c.hi);
        let _ = writeln!(s, "formalism = {}", c.formalism);
        let _ = writeln!(s, "budget = {}", c.budget);
        let _ = writeln!(s, "block = {}", c.block);
        let _ = writeln!(s, "next_block = {}", self.next_block);
        let _ = writeln!(s, "hits = {}", self.hits.len());
        for h in &self.hits {
            let _ = writeln!(s, "hit = {}", hit_fields(h).join(","));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let mut scalars = std::collections::BTreeMap::new();
        let mut hits = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| format!("line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "hit" {
                let record = csv::StringRecord::from(value.split(',').collect::<Vec<_>>());
                hits.push(parse_hit(&record).with_context(|| format!("line {}", i + 1))?);
            } else if scalars.insert(key.to_string(), value.to_string()).is_some() {
                bail!("line {}: duplicate key {key}", i + 1);
            }
        }
        let get = |key: &str| scalars.get(key).with_context(|| format!("missing key {key}"));
        let num = |key: &str| -> Result<u64> { get(key)?.parse().with_context(|| format!("key {key}")) };
        if num("version")? != u64::from(VERSION) {
            bail!("unsupported checkpoint version {}", get("version")?);
        }
        let config = SearchConfig {
            lo: num("lo")?,
            hi: num("hi")?,
            formalism: get("formalism")?.parse().map_err(|e| anyhow::anyhow!("{e}"))?,
            budget: num("budget")?,
            block: num("block")?,
        };
        config.validate()?;
        if *get("config")? != config.hash() {
            bail!("config hash does not match the recorded fields");
        }
        if num("hits")? != hits.len() as u64 {
            bail!("expected {} hit lines, found {}", get("hits")?, hits.len());
        }
        let next_block = num("next_block")?;
        if next_block > config.block_count() {
            bail!("next_block {next_block} is past the end of the range");
        }
        Ok(Checkpoint { config, next_block, hits })
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Checkpoint::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = tmp_path(path);
        let mut file = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(self.to_text().as_bytes())?;
        file.sync_all()?;
        drop(file);
        fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
        Ok(())
    }
}
