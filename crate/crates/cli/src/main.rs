//! `lieinv`: build Chevalley bases and Kostant frames, enumerate pairing
//! terms, compute primitive invariants and verify them.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lieinv_core::{Error, Family, Scope};

#[derive(Parser, Debug)]
#[command(
    name = "lieinv",
    version,
    about = "Adjoint invariants of simple Lie algebras"
)]
struct Cli {
    /// Print stage timings to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots and structure constants of a Chevalley basis.
    Algebra(AlgebraArgs),
    /// The graded frame: ε, slice, cyclic vectors and preimages.
    Frame(AlgebraArgs),
    /// List or count the pairing terms of a degree.
    Terms(TermsArgs),
    /// Compute primitive (or seeded) invariants.
    Compute(ComputeArgs),
    /// Check an invariant file.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct TypeArgs {
    /// Cartan type letter, A to G.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Borel,
    Full,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Borel => Scope::Borel,
            ScopeArg::Full => Scope::Full,
        }
    }
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct TermsArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long)]
    degree: u32,
    #[arg(long, value_enum, default_value = "full")]
    scope: ScopeArg,
    /// Only print the list sizes.
    #[arg(long)]
    counts: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// 1-based slice index, or `all`.
    #[arg(long, default_value = "all")]
    index: String,
    #[arg(long, value_enum, default_value = "full")]
    scope: ScopeArg,
    /// Generic seeds: the polynomial in xi1..xil the invariant restricts to
    /// on the slice, e.g. "xi1^3 + 2*xi2^2". Overrides --index.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Directory for the polynomial files and manifest; stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = "LIEINV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore cached results (checkpoints are still written).
    #[arg(long)]
    no_cache: bool,
    /// Continue from the cached checkpoint of the same computation.
    #[arg(long)]
    resume: bool,
    /// Stop once this many strata are complete, leaving a checkpoint.
    #[arg(long)]
    stop_after: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Required for full-scope runs on E7 and E8.
    #[arg(long)]
    allow_long_run: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Invariant JSON file written by `compute --format json`.
    input: PathBuf,
    /// Slice target for seeded invariants; defaults to xi_j for index j.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Success,
    VerificationFailed,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// A request the CLI refuses before doing any work.
    Config(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Config(s) => f.write_str(s),
        }
    }
}

/// Configuration problems exit 2, internal defects 3.
fn exit_code(err: &CliError) -> u8 {
    let CliError::Core(err) = err else { return 2 };
    match err {
        Error::InvalidType { .. }
        | Error::IndexOutOfRange { .. }
        | Error::VariableMismatch { .. }
        | Error::UnboundVariable(_)
        | Error::DegreeMismatch { .. }
        | Error::SeedMismatch(_)
        | Error::ResumeMismatch { .. }
        | Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Algebra(a) => commands::algebra(&a),
        Command::Frame(a) => commands::frame(&a),
        Command::Terms(a) => commands::terms(&a),
        Command::Compute(a) => commands::compute(&a, cli.verbose),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lieinv: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
