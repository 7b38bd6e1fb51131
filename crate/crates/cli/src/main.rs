use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use paradox::commands::{self, BoundsQuery, SearchOptions};
use paradox::paper::{self, PaperCheckOptions};
use paradox::shard::{SearchConfig, DEFAULT_BLOCK};
use paradox::tables::References;
use paradox::{parse_natural, parse_range, parse_rational, parse_u64};
use paradox_core::poset::DEFAULT_HASSE_CAP;
use paradox_core::records::RecordKind;
use paradox_core::search::DEFAULT_BUDGET;
use paradox_core::{Formalism, Natural};

/// Paradoxical Collatz sequences: censuses, stopping-time checks, order
/// diagrams, and the bounds on their length.
#[derive(Parser, Debug)]
#[command(name = "paradox", version, about)]
struct Cli {
    /// Run the full reproduction scoreboard and exit.
    #[arg(long)]
    paper_check: bool,
    #[command(flatten)]
    check: CheckArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads.
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Step budget per start.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_u64_arg)]
    budget: u64,
}

#[derive(Args, Debug, Clone)]
struct CheckArgs {
    /// Directory holding max_excursion_t.txt and delay_col.txt, replacing the
    /// bundled reference tables.
    #[arg(long, global = true)]
    refs: Option<PathBuf>,
    /// Upper end of the empty-window scan in the scoreboard.
    #[arg(long, default_value = "1e7", value_parser = parse_u64_arg, global = true)]
    null_window_max: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate paradoxical sequences for starts in a range.
    Search {
        #[arg(long, value_parser = parse_range_arg)]
        range: (u64, u64),
        #[arg(long, default_value = "shortcut", value_parser = parse_formalism)]
        formalism: Formalism,
        #[command(flatten)]
        common: Common,
        /// Hit table (CSV).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact census table (CSV).
        #[arg(long)]
        census: Option<PathBuf>,
        /// Resume from and save progress to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Omit the generation-time comment from the hit table.
        #[arg(long)]
        no_timestamp: bool,
        /// Decimal places in the printed census (truncated).
        #[arg(long, default_value_t = 2)]
        decimals: usize,
        /// Starts per work block.
        #[arg(long, default_value_t = DEFAULT_BLOCK, value_parser = parse_u64_arg)]
        block: u64,
        /// Stop after this many blocks; resume later with --checkpoint.
        #[arg(long, requires = "checkpoint")]
        stop_after_blocks: Option<u64>,
    },
    /// Check that stopping time and coefficient stopping time agree.
    Cst {
        #[arg(long, value_parser = parse_range_arg)]
        range: (u64, u64),
        #[command(flatten)]
        common: Common,
    },
    /// Hasse diagram of the parity vectors of length J with Q ones (DOT).
    Poset {
        j: usize,
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest length accepted.
        #[arg(long, default_value_t = DEFAULT_HASSE_CAP)]
        cap: u64,
    },
    /// Bounds on paradoxical sequences.
    Bounds {
        #[command(subcommand)]
        query: BoundsCommand,
    },
    /// Compute record holders and compare them with the reference tables.
    Records {
        #[arg(long, value_parser = parse_kind)]
        kind: RecordKind,
        /// Largest start scanned.
        #[arg(long, value_parser = parse_u64_arg)]
        upto: u64,
        #[command(flatten)]
        common: Common,
        /// Write the computed table in reference format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a hit table, or run the scoreboard with --paper-check.
    Check {
        /// Hit table to re-verify.
        #[arg(long)]
        hits: Option<PathBuf>,
        #[arg(long)]
        paper_check: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Recompute the chain of bounds on the length of paradoxical sequences.
    Chain {
        #[arg(long, default_value = "1e9", value_parser = parse_natural_arg)]
        n0: Natural,
    },
    /// Largest j with j^14.3 exp(-j / (alpha beta)) above 3 log 3 / log 2.
    Heuristic {
        #[arg(value_parser = parse_rational_arg)]
        alpha: BigRational,
        #[arg(value_parser = parse_rational_arg)]
        beta: BigRational,
    },
    /// Convergents of log 2 / log 3.
    Convergents { count: usize },
    /// Lower bound on |j log 2 - q log 3|.
    Rhin { j: u64, q: u64 },
    /// Mean remainder over all residues mod 2^J.
    Mean { j: u32 },
    /// Extreme remainders and the residue classes attaining them.
    Extremes { j: u64, q: u64 },
    /// Paradoxical starts of a short length.
    Classify { j: u64 },
    /// Exponent pairs (a, b) with 1 - eps < 3^a / 2^b < 1.
    Pairs {
        #[arg(long, default_value = "1/4", value_parser = parse_rational_arg)]
        eps: BigRational,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_u64_arg(s: &str) -> Result<u64, String> {
    parse_u64(s).map_err(|e| e.to_string())
}

fn parse_natural_arg(s: &str) -> Result<Natural, String> {
    parse_natural(s).map_err(|e| e.to_string())
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_range_arg(s: &str) -> Result<(u64, u64), String> {
    parse_range(s).map_err(|e| e.to_string())
}

fn parse_formalism(s: &str) -> Result<Formalism, String> {
    s.parse().map_err(|e: paradox_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<RecordKind, String> {
    s.parse().map_err(|e: paradox_core::Error| e.to_string())
}

fn scoreboard(common: &Common, check: &CheckArgs, out: &mut dyn Write) -> Result<bool> {
    let opts = PaperCheckOptions {
        threads: common.threads,
        budget: common.budget,
        null_window_max: check.null_window_max,
        refs: References::load(check.refs.as_deref())?,
    };
    Ok(paper::run(&opts, out)?.iter().all(|c| c.passed))
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let refs = || References::load(cli.check.refs.as_deref());
    let command = match cli.command {
        Some(c) => c,
        None if cli.paper_check => {
            let common = Common { threads: default_threads(), budget: DEFAULT_BUDGET };
            return scoreboard(&common, &cli.check, &mut out);
        }
        None => anyhow::bail!("no subcommand given; see --help"),
    };
    match command {
        Command::Search {
            range,
            formalism,
            common,
            out: path,
            census,
            checkpoint,
            no_timestamp,
            decimals,
            block,
            stop_after_blocks,
        } => {
            let config = SearchConfig { block, ..SearchConfig::new(range.0, range.1, formalism, common.budget) };
            let opts = SearchOptions {
                config,
                threads: common.threads,
                out: path,
                census_out: census,
                checkpoint,
                timestamp: !no_timestamp,
                decimals,
                stop_after: stop_after_blocks,
            };
            commands::search(&opts, &mut out)
        }
        Command::Cst { range, common } => commands::cst(range.0, range.1, common.budget, common.threads, &mut out),
        Command::Poset { j, q, out: path, cap } => commands::poset(j, q, cap, path.as_deref(), &mut out),
        Command::Bounds { query } => {
            let query = match query {
                BoundsCommand::Chain { n0 } => BoundsQuery::Chain { n0 },
                BoundsCommand::Heuristic { alpha, beta } => BoundsQuery::Heuristic { alpha, beta },
                BoundsCommand::Convergents { count } => BoundsQuery::Convergents { count },
                BoundsCommand::Rhin { j, q } => BoundsQuery::Rhin { j, q },
                BoundsCommand::Mean { j } => BoundsQuery::Mean { j },
                BoundsCommand::Extremes { j, q } => BoundsQuery::Extremes { j, q },
                BoundsCommand::Classify { j } => BoundsQuery::Classify { j },
                BoundsCommand::Pairs { eps, count } => BoundsQuery::Pairs { eps, count },
            };
            commands::bounds(&query, &refs()?, &mut out)
        }
        Command::Records { kind, upto, common, out: path } => {
            commands::records(kind, upto, common.budget, common.threads, &refs()?, path.as_deref(), &mut out)
        }
        Command::Check { hits, paper_check, common } => {
            let mut ok = true;
            if let Some(path) = hits {
                ok &= commands::check_hits(&path, &mut out)?;
            } else if !paper_check && !cli.paper_check {
                anyhow::bail!("check needs --hits FILE or --paper-check");
            }
            if paper_check || cli.paper_check {
                ok &= scoreboard(&common, &cli.check, &mut out)?;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
