//! Command-line front end: tableau inspection, propagation runs, the
//! reference experiment, and gyro-log processing.
//!
//! Exit codes: 0 success, 1 usage, 2 input validation, 3 numerical failure.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use skewflow_core::Error as CoreError;

#[derive(Debug, Parser)]
#[command(name = "skewflow", version, about = "Structure-preserving integration of Q' = S Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a tableau's symplecticity matrix and verdict.
    CheckTableau(CheckTableauArgs),
    /// Integrate Q' = S Q with a fixed step and write the trajectory CSV.
    Propagate(PropagateArgs),
    /// Run the midpoint vs. explicit RK2 comparison on the 3x3 test problem.
    PaperExperiment(ExperimentArgs),
    /// Propagate attitude through a gyro log.
    Gyro(GyroArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TableauSource {
    /// Built-in tableau name.
    #[arg(long)]
    pub name: Option<String>,
    /// Tableau file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckTableauArgs {
    #[command(flatten)]
    pub source: TableauSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Direct,
    FixedPoint,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Method label (cayley-midpoint, rk2-closed, a built-in tableau) or tableau file.
    #[arg(long)]
    pub method: String,
    /// Body rate wx,wy,wz in rad/s; selects the 3x3 hat-map coefficient.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "s_file", conflicts_with = "s_file")]
    pub omega: Option<String>,
    /// Whitespace-separated MxM skew coefficient.
    #[arg(long)]
    pub s_file: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Initial matrix (identity when absent).
    #[arg(long)]
    pub q0: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// Accept a non-orthogonal initial matrix.
    #[arg(long)]
    pub allow_nonorthogonal: bool,
    #[arg(long, value_enum, default_value_t = SolverArg::Direct)]
    pub stage_solver: SolverArg,
    /// Also write the matrices, one flattened row-major matrix per line.
    #[arg(long)]
    pub dump_q: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GyroArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub method: String,
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Add per-record error against the exact per-interval flow.
    #[arg(long)]
    pub reference: bool,
    #[arg(long)]
    pub q0: Option<PathBuf>,
    #[arg(long)]
    pub allow_nonorthogonal: bool,
    #[arg(long)]
    pub dump_q: Option<PathBuf>,
}

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Input(_) => 2,
            Self::Numerical(_) => 3,
        }
    }

    pub fn input(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        Self::Input(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Input(m) => write!(f, "invalid input: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Singular { .. }
            | CoreError::StageSolve(_)
            | CoreError::Convergence { .. }
            | CoreError::IndeterminateOrder { .. } => Self::Numerical(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::CheckTableau(a) => commands::check_tableau(&a),
        Command::Propagate(a) => commands::propagate(&a),
        Command::PaperExperiment(a) => commands::paper_experiment(&a),
        Command::Gyro(a) => commands::gyro(&a),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(e) => {
            eprintln!("skewflow: {e}");
            e.exit_code()
        }
    }
}
