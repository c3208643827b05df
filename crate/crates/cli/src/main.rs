use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod input;
mod output;
mod solve;
mod verify;

use verify::Suite;

/// Verification suites and extremal solvers for lattice fixed points and
/// grid quasi-variational inclusions.
#[derive(Parser, Debug)]
#[command(name = "subpoint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order-kernel laws on catalog and random lattices.
    VerifyOrder(VerifyArgs),
    /// Subpoint and fixed point theorems on random multifunctions.
    VerifyFixpoint(VerifyArgs),
    /// Solution-set inclusions for lattice inclusion problems.
    VerifyQvip(VerifyArgs),
    /// Grid operator, compensator, sandwich and extremality checks.
    VerifyGrid(VerifyArgs),
    /// Every suite above.
    VerifyAll(VerifyArgs),
    /// Smallest and greatest solutions of one grid problem.
    Solve(SolveArgs),
    /// Solve a grid problem across a grid of `p` and `n` values.
    Sweep(SweepArgs),
    /// Exhaustive search on a quantized problem, checked against the drivers.
    Oracle(SolveArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for CSV artifacts and summary.json.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Small sample counts for smoke runs.
    #[arg(long)]
    quick: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    /// JSON config file or preset name.
    pub input: String,
    /// Solver and outer-loop tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sweep limit for each inner solve.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Outer step limit for the drivers.
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// Accepted for symmetry with the suites; solves are deterministic.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    solve: SolveArgs,
    /// Comma-separated exponents; defaults to the config's.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Comma-separated node counts; defaults to the config's.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
}

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum UsageError {
    Config(String),
    Io(String),
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UsageError::Config(m) => write!(f, "config error: {m}"),
            UsageError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError::Io(e.to_string())
    }
}

impl From<csv::Error> for UsageError {
    fn from(e: csv::Error) -> Self {
        UsageError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for UsageError {
    fn from(e: serde_json::Error) -> Self {
        UsageError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::VerifyOrder(a) => verify::run(&[Suite::Order], a.seed, a.quick, &a.common),
        Command::VerifyFixpoint(a) => verify::run(&[Suite::Fixpoint], a.seed, a.quick, &a.common),
        Command::VerifyQvip(a) => verify::run(&[Suite::Qvip], a.seed, a.quick, &a.common),
        Command::VerifyGrid(a) => verify::run(&[Suite::Grid], a.seed, a.quick, &a.common),
        Command::VerifyAll(a) => verify::run(&Suite::ALL, a.seed, a.quick, &a.common),
        Command::Solve(a) => solve::solve(&a),
        Command::Sweep(a) => solve::sweep(&a.solve, &a.p, &a.n),
        Command::Oracle(a) => solve::oracle(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
