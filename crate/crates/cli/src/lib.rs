//! Command-line surface for the subdivision cost model and renderers.
//!
//! Five subcommands: `model` (closed-form cost rows), `render` (PGM images
//! plus per-level stats), `bench` (timed comparisons with an oracle
//! mismatch gate), `optimize` (parameter sweeps), and `verify` (PGM
//! comparison). Everything machine-readable is CSV with a fixed header;
//! images are binary PGM. Exit codes: 0 success, 1 runtime or verification
//! failure, 2 usage error.

pub mod commands;
pub mod pgm;

use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssdiv_core::{Scheme, Viewport};

/// A failed command, split by exit code: usage errors (bad flags or
/// invalid configurations) exit 2, runtime failures (IO, infeasible
/// sweeps, verification gates) exit 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    #[must_use]
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    #[must_use]
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(
    name = "ssdiv",
    version,
    about = "Subdivision cost model and adaptive Mandelbrot renderers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the closed-form cost model; one CSV row per problem size
    Model(ModelArgs),
    /// Render a dwell grid to a binary PGM image
    Render(RenderArgs),
    /// Time approaches against the exhaustive oracle
    Bench(BenchArgs),
    /// Sweep (g, r, B) shapes for a model or measured objective
    Optimize(OptimizeArgs),
    /// Compare two PGM images; exits 0 iff they differ by at most 1000 ppm
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproachArg {
    #[value(name = "EX")]
    Ex,
    #[value(name = "ASK")]
    Ask,
    #[value(name = "REC")]
    Rec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeArg {
    #[value(name = "SBR")]
    Sbr,
    #[value(name = "MBR")]
    Mbr,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Sbr => Scheme::Sbr,
            SchemeArg::Mbr => Scheme::Mbr,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineArg {
    #[value(name = "MODEL")]
    Model,
    #[value(name = "ASK")]
    Ask,
    #[value(name = "REC")]
    Rec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveArg {
    #[value(name = "MIN_WORK")]
    MinWork,
    #[value(name = "MIN_TIME_SBR")]
    MinTimeSbr,
    #[value(name = "MIN_TIME_MBR")]
    MinTimeMbr,
    #[value(name = "MIN_WALL_TIME")]
    MinWallTime,
}

/// Timed approach identifiers as they appear in the bench CSV.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchApproach {
    #[value(name = "EX")]
    Ex,
    #[value(name = "ASK_SBR")]
    AskSbr,
    #[value(name = "ASK_MBR")]
    AskMbr,
    #[value(name = "REC_SBR")]
    RecSbr,
    #[value(name = "REC_MBR")]
    RecMbr,
}

impl BenchApproach {
    #[must_use]
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchApproach::Ex => "EX",
            BenchApproach::AskSbr => "ASK_SBR",
            BenchApproach::AskMbr => "ASK_MBR",
            BenchApproach::RecSbr => "REC_SBR",
            BenchApproach::RecMbr => "REC_MBR",
        }
    }
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Problem sizes, one CSV row each (comma-separated, powers of two)
    #[arg(long, value_delimiter = ',', default_value = "1024")]
    pub n: Vec<u64>,
    /// Initial regions per axis
    #[arg(long, default_value_t = 4)]
    pub g: u64,
    /// Children per axis on subdivision
    #[arg(long, default_value_t = 2)]
    pub r: u64,
    /// Stopping side
    #[arg(long = "B", default_value_t = 16)]
    pub b: u64,
    /// Subdivision probability per region
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Per-cell evaluation cost (dwell limit)
    #[arg(long, default_value_t = 512.0)]
    pub a: f64,
    /// Subdivision overhead in units of A
    #[arg(long, default_value_t = 10.0)]
    pub lambda: f64,
    /// Processor count (regions in flight)
    #[arg(long, default_value_t = 128)]
    pub q: u64,
    /// Cores per processor
    #[arg(long, default_value_t = 64)]
    pub c: u64,
    /// Cross-check every row against the Monte Carlo simulator with this
    /// many trials; deviations beyond 1% fail the run
    #[arg(long = "check-mc")]
    pub check_mc: Option<u32>,
    /// Simulator seed for --check-mc
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// What renders the image: the exhaustive baseline, the level-by-level
    /// engine, or the fork-join engine
    #[arg(long, value_enum, default_value_t = ApproachArg::Ask)]
    pub approach: ApproachArg,
    /// Image side in pixels
    #[arg(long, default_value_t = 512)]
    pub n: u32,
    /// Complex window as re_min,re_max,im_min,im_max
    #[arg(long, value_parser = parse_viewport, default_value = "-1.5,-1,0.5,1", allow_hyphen_values = true)]
    pub viewport: Viewport,
    /// Dwell limit
    #[arg(long, default_value_t = 512)]
    pub dwell: u32,
    /// Initial regions per axis
    #[arg(long, default_value_t = 32)]
    pub g: u32,
    /// Children per axis on subdivision
    #[arg(long, default_value_t = 4)]
    pub r: u32,
    /// Stopping side
    #[arg(long = "B", default_value_t = 16)]
    pub b: u32,
    /// Pixel-task scheme for the subdivision engines
    #[arg(long, value_enum, default_value_t = SchemeArg::Sbr)]
    pub scheme: SchemeArg,
    /// Tile side for the MBR scheme
    #[arg(long, default_value_t = 16)]
    pub tile: u32,
    /// Worker threads (defaults to SSDIV_WORKERS, then all cores)
    #[arg(long, env = "SSDIV_WORKERS")]
    pub workers: Option<usize>,
    /// Output PGM path
    #[arg(long)]
    pub out: PathBuf,
    /// Per-level stats CSV path (level-by-level engine only)
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Approaches to time (comma-separated)
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "EX,ASK_SBR,ASK_MBR,REC_SBR,REC_MBR"
    )]
    pub approaches: Vec<BenchApproach>,
    /// Image sides to bench (comma-separated)
    #[arg(long, value_delimiter = ',', default_value = "1024")]
    pub n: Vec<u32>,
    /// Initial regions per axis
    #[arg(long, default_value_t = 32, conflicts_with = "optimal")]
    pub g: u32,
    /// Children per axis on subdivision
    #[arg(long, default_value_t = 4, conflicts_with = "optimal")]
    pub r: u32,
    /// Stopping side
    #[arg(long = "B", default_value_t = 16, conflicts_with = "optimal")]
    pub b: u32,
    /// Take g, r, B from the best feasible row of a landscape CSV
    #[arg(long)]
    pub optimal: Option<PathBuf>,
    /// Tile side for MBR approaches
    #[arg(long, default_value_t = 16)]
    pub tile: u32,
    /// Complex window as re_min,re_max,im_min,im_max
    #[arg(long, value_parser = parse_viewport, default_value = "-1.5,-1,0.5,1", allow_hyphen_values = true)]
    pub viewport: Viewport,
    /// Dwell limit
    #[arg(long, default_value_t = 512)]
    pub dwell: u32,
    /// Worker threads (defaults to SSDIV_WORKERS, then all cores)
    #[arg(long, env = "SSDIV_WORKERS")]
    pub workers: Option<usize>,
    /// Timed repetitions per cell after one discarded warm-up
    #[arg(long, default_value_t = 5)]
    pub reps: u32,
    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// MODEL scores shapes with the closed forms; ASK and REC time renders
    #[arg(long, value_enum, default_value_t = EngineArg::Model)]
    pub engine: EngineArg,
    /// Quantity to minimize (MIN_WALL_TIME requires ASK or REC)
    #[arg(long, value_enum, default_value_t = ObjectiveArg::MinTimeSbr)]
    pub objective: ObjectiveArg,
    /// Pixel-task scheme for empirical sweeps
    #[arg(long, value_enum, default_value_t = SchemeArg::Sbr)]
    pub scheme: SchemeArg,
    /// Candidate g values (default 2,4,...,1024)
    #[arg(long, value_delimiter = ',')]
    pub g: Option<Vec<u64>>,
    /// Candidate r values (default 2,4,...,1024)
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<u64>>,
    /// Candidate B values (default 2,4,...,1024)
    #[arg(long = "B", value_delimiter = ',')]
    pub b: Option<Vec<u64>>,
    /// Problem size
    #[arg(long, default_value_t = 65536)]
    pub n: u64,
    /// Subdivision probability (model sweeps)
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Per-cell evaluation cost (model) and dwell limit scale
    #[arg(long, default_value_t = 512.0)]
    pub a: f64,
    /// Subdivision overhead in units of A (model sweeps)
    #[arg(long, default_value_t = 10.0)]
    pub lambda: f64,
    /// Processor count (model sweeps)
    #[arg(long, default_value_t = 128)]
    pub q: u64,
    /// Cores per processor (model sweeps)
    #[arg(long, default_value_t = 64)]
    pub c: u64,
    /// Complex window for empirical sweeps
    #[arg(long, value_parser = parse_viewport, default_value = "-1.5,-1,0.5,1", allow_hyphen_values = true)]
    pub viewport: Viewport,
    /// Dwell limit for empirical sweeps
    #[arg(long, default_value_t = 512)]
    pub dwell: u32,
    /// Tile side for empirical MBR sweeps
    #[arg(long, default_value_t = 16)]
    pub tile: u32,
    /// Worker threads (defaults to SSDIV_WORKERS, then all cores)
    #[arg(long, env = "SSDIV_WORKERS")]
    pub workers: Option<usize>,
    /// Timed repetitions per shape in empirical sweeps
    #[arg(long, default_value_t = 5)]
    pub reps: u32,
    /// Landscape CSV file (standard output when omitted; the best shape is
    /// then reported on standard error instead of standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// First PGM file
    pub a: PathBuf,
    /// Second PGM file
    pub b: PathBuf,
}

/// Parses `re_min,re_max,im_min,im_max`.
pub fn parse_viewport(s: &str) -> Result<Viewport, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected re_min,re_max,im_min,im_max (got {} fields)",
            parts.len()
        ));
    }
    let mut v = [0.0f64; 4];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coordinate {part:?}: {e}"))?;
    }
    Viewport::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// Resolves the worker count: explicit flag or SSDIV_WORKERS first, then
/// every available core.
pub fn resolve_workers(flag: Option<usize>) -> Result<usize, Failure> {
    match flag {
        Some(0) => Err(Failure::Usage("workers must be at least 1".into())),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism()
            .map(NonZeroUsize::get)
            .unwrap_or(1)),
    }
}

/// Formats a float for CSV: shortest representation that round-trips.
#[must_use]
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Writes to the given path, or standard output when absent.
pub fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::Runtime(format!("cannot write standard output: {e}")))
        }
    }
}

pub fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Model(args) => commands::model::run(&args),
        Command::Render(args) => commands::render::run(&args),
        Command::Bench(args) => commands::bench::run(&args),
        Command::Optimize(args) => commands::optimize::run(&args),
        Command::Verify(args) => commands::verify::run(&args),
    }
}
