//! Command-line front end.

pub mod commands;
pub mod config;
pub mod io;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::sim::SweepAxis;
use crate::stats::Utility;

pub use config::{ExperimentConfig, Overrides};

pub mod exit_code {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const IO: i32 = 4;
    pub const DATA: i32 = 5;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::USAGE,
            message: msg.into(),
        }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::IO,
            message: msg.into(),
        }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::DATA,
            message: msg.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::TooShort { .. } | Error::Degenerate(_) | Error::LagOutOfRange { .. } => {
                exit_code::DATA
            }
            Error::Unknown { .. }
            | Error::Empty(_)
            | Error::DuplicateSeed(_)
            | Error::NotRiskAverse(_) => exit_code::USAGE,
            Error::InvalidParam { .. }
            | Error::NonStationary { .. }
            | Error::NegativeSigma(_)
            | Error::ZeroVolume
            | Error::Domain { .. }
            | Error::RatioNotZero { .. } => exit_code::VALIDATION,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "microgarch",
    version,
    about = "Three-trader market simulator and micro-to-GARCH mapping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate return series; writes a trajectory CSV and run metadata per seed.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Stylized-facts report for a CSV of returns, or for simulated runs.
    Stats {
        /// CSV with an `r` column (or a single column). Simulates from the config when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Report path (JSON). Defaults to <out-dir>/stats_report.json.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Representative GARCH(1,1) coefficients implied by the micro parameters.
    GarchMap {
        /// Also write the mapping as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Sweep one parameter; writes a CSV of GARCH coefficients and batch medians.
    Sweep {
        /// p1 | p2 | lambda | gamma | rho | k
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        values: Vec<f64>,
        /// Output CSV. Defaults to <out-dir>/sweep_<axis>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check that expected utility falls as sigma grows for a risk-averse utility.
    VerifyLemma {
        /// exp[:a] | log[:shift] | power[:eta[:shift]] | linear
        #[arg(long, default_value = "exp:1")]
        utility: Utility,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        /// Comma-separated, strictly increasing sigma grid.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
        )]
        sigmas: Vec<f64>,
        /// Simpson panels over the shock window.
        #[arg(long, default_value_t = crate::stats::lemma::DEFAULT_NODES)]
        nodes: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Parse arguments, run, and return the process exit code. Diagnostics go
/// to stderr.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    exit_code::OK
                }
                _ => exit_code::USAGE,
            };
        }
    };
    let stdout = std::io::stdout();
    match commands::run(cli.command, &mut stdout.lock()) {
        Ok(()) => exit_code::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
