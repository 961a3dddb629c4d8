//! `brewster`: simulate the Brewster-angle differentiator, compare its
//! Green's function with the Taylor model, and sweep the usable bandwidth.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use brewster_core::Error;
use clap::{Parser, Subcommand};
use thiserror::Error as ThisError;

use config::{GreenCompareArgs, SimulateArgs, SweepArgs};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::InvalidGrid(_)
            | Error::Undersampled(_)
            | Error::EmptyWindow { .. }
            | Error::OutsideWindow { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "brewster", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflect a beam at the Brewster angle and compare with the ideal derivative
    Simulate {
        /// TOML file with any of the flag keys (snake_case)
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        args: SimulateArgs,
    },
    /// Tabulate the exact and first-order Taylor Green's functions
    GreenCompare {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        args: GreenCompareArgs,
    },
    /// Largest bandwidth meeting an error bound, for a range of indices
    SweepBandwidth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        args: SweepArgs,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config, args } => {
            let file = config::load_file(config.as_deref())?;
            commands::simulate(&config::ExperimentConfig::resolve(args, file)?)
        }
        Command::GreenCompare { config, args } => {
            let file = config::load_file(config.as_deref())?;
            commands::green_compare(&config::GreenCompareConfig::resolve(args, file)?)
        }
        Command::SweepBandwidth { config, args } => {
            let file = config::load_file(config.as_deref())?;
            commands::sweep(&config::SweepConfig::resolve(args, file)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
