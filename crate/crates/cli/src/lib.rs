//! Command-line front-end: every library operation on JSON input files,
//! reported as a deterministic JSON (or CSV) record.
//!
//! Exit codes: 0 for a pass or a computed value, 1 for a failed check
//! (the report carries a certificate), 2 for usage and validation errors.

mod commands;
mod input;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use report::{Format, RunReport, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "dsqo",
    version,
    about = "Exact tools for doubly stochastic quadratic operators"
)]
pub struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is x majorized by y?
    Majorize {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Evaluate Vx.
    Apply {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        x: PathBuf,
    },
    /// Subset-sum test for U_1.
    CheckU1 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Membership in U_k with a witness T in T_k.
    CheckUk {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// A stochastic T with (T + T')/2 = A.
    SolveSym {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// All vertices of the set of stochastic T with (T + T')/2 = A.
    SolutionVertices {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Exact doubly stochastic test for an operator.
    CheckDsqo {
        #[arg(long)]
        operator: PathBuf,
    },
    /// The three coefficient conditions necessary for double stochasticity.
    CheckNecessary {
        #[arg(long)]
        operator: PathBuf,
    },
    /// Sampled search for x with Vx not majorized by x.
    WitnessSearch {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extend leading slices to a doubly stochastic operator.
    Complete {
        /// JSON array of symmetric matrices.
        #[arg(long)]
        prefix: PathBuf,
        /// Dimension; defaults to the size of the prefix matrices.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Reorder the slices of an operator.
    Permute {
        #[arg(long)]
        operator: PathBuf,
        /// 1-based permutation, e.g. 2,3,1.
        #[arg(long, value_delimiter = ',', required = true)]
        pi: Vec<usize>,
    },
    /// Extreme points of U_1.
    EnumU1 {
        #[arg(long)]
        m: usize,
        /// Cross-check against double description vertex enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Extreme points of the doubly stochastic operator polytope.
    EnumB {
        #[arg(long)]
        m: usize,
        /// Cross-check against double description vertex enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Extreme-point counts with every enumeration path cross-checked.
    VerifyCounts {
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Majorize { .. } => "majorize",
            Command::Apply { .. } => "apply",
            Command::CheckU1 { .. } => "check-u1",
            Command::CheckUk { .. } => "check-uk",
            Command::SolveSym { .. } => "solve-sym",
            Command::SolutionVertices { .. } => "solution-vertices",
            Command::CheckDsqo { .. } => "check-dsqo",
            Command::CheckNecessary { .. } => "check-necessary",
            Command::WitnessSearch { .. } => "witness-search",
            Command::Complete { .. } => "complete",
            Command::Permute { .. } => "permute",
            Command::EnumU1 { .. } => "enum-u1",
            Command::EnumB { .. } => "enum-b",
            Command::VerifyCounts { .. } => "verify-counts",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Input failed validation or the request is outside what is supported.
    Validation(String),
}

impl From<dsqo::Error> for CliError {
    fn from(e: dsqo::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name), runs the command and renders the report.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: report.verdict.exit_code(),
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(CliError::Validation(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

/// Runs a parsed command and times it.
pub fn execute(command: &Command) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (verdict, certificate, result) = commands::dispatch(command)?;
    Ok(RunReport {
        command: command.name().to_string(),
        verdict,
        certificate,
        result,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}
