//! Command-line front end: argument parsing, JSON documents and the result
//! cache.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub mod cache;
pub mod commands;
pub mod report;

pub use cache::{Cache, CACHE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
/// Capacity or budget exhausted; a bounds-only document is emitted.
pub const EXIT_LIMIT: i32 = 3;
/// A verification found violations; the evidence is in the document.
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "groupapprox", version, about = "Worst-case approximability of functions on finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value or bounds for one group and metric.
    Compute(ComputeArgs),
    /// Both values for every catalog group up to an order.
    Table(TableArgs),
    /// Verify the hard function on a JK group.
    VerifyJk(VerifyJkArgs),
    /// Counting bounds for function families M1 -> M2.
    Bounds(BoundsArgs),
    /// A permutation avoiding the classes of a partition.
    PartitionAvoid(PartitionArgs),
    /// Export one of the explicit hard functions.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Enapp,
    Affapp,
}

impl Metric {
    pub fn kind(self) -> groupapprox::FamilyKind {
        match self {
            Metric::Enapp => groupapprox::FamilyKind::Endo,
            Metric::Affapp => groupapprox::FamilyKind::Affine,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Enapp => "enapp",
            Metric::Affapp => "affapp",
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Group spec, e.g. `cyclic:6`, `dihedral(8)`, `file:table.txt`.
    #[arg(long)]
    pub group: groupapprox::GroupSpec,
    #[arg(long, value_enum)]
    pub metric: Metric,
    /// Insist on an exact value (the default).
    #[arg(long, conflicts_with = "bounds_only")]
    pub exact: bool,
    /// Report certificates and bounds without searching.
    #[arg(long)]
    pub bounds_only: bool,
    /// Search budget in nodes.
    #[arg(long, default_value_t = groupapprox::approx::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
    /// Allow JK groups with p > 3.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub max_order: usize,
    #[arg(long, default_value_t = groupapprox::approx::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Sampled,
}

#[derive(Debug, Args)]
pub struct VerifyJkArgs {
    #[arg(long)]
    pub p: u64,
    /// `L1,L2`.
    #[arg(long)]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Pairs drawn in sampled mode.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `singer` or a file with four rows of four integers.
    #[arg(long, default_value = "singer")]
    pub sigma: String,
    /// Allow p > 3 (sampled mode only).
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub m1: usize,
    #[arg(long)]
    pub m2: usize,
    /// `log2` (meaning log2 m1), a number, or a file holding a number.
    #[arg(long = "f")]
    pub fval: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Class sizes, e.g. `3,3,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub classes: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// `cyclic-enapp:N`, `prime-square:P`, `rem-quot:P,K`, `z6-swap`,
    /// `klein` or `sym3`.
    #[arg(long)]
    pub name: String,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the table as `index,image` CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Process environment seen by the commands.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub cache_dir: Option<PathBuf>,
}

impl Env {
    pub fn from_process() -> Self {
        Env {
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }
}

/// What a command produced: its exit status, its document and a short
/// human-readable view.
#[derive(Debug, Clone)]
pub struct Reply {
    pub status: i32,
    pub document: Value,
    pub human: String,
}

/// Parses `argv` (including the program name), runs the command and writes
/// to `out` and `err`. Returns the exit status.
pub fn run_with<I, T>(argv: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return status;
        }
    };
    let destination = match &cli.command {
        Command::Compute(a) => a.out.clone(),
        Command::Table(a) => a.out.clone(),
        Command::VerifyJk(a) => a.out.clone(),
        Command::Bounds(a) => a.out.clone(),
        Command::PartitionAvoid(a) => a.out.clone(),
        Command::Witness(a) => a.out.clone(),
    };
    let reply = match commands::execute(&cli.command, env) {
        Ok(reply) => reply,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.status();
        }
    };
    let text = report::render(&reply.document);
    match destination {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            let _ = out.write_all(reply.human.as_bytes());
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    reply.status
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = Env::from_process();
    run_with(argv, &env, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
