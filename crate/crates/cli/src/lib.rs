//! Command-line front end for `semimirror`.
//!
//! Subcommands: `xi-map`, `decay-sweep`, `oracle-check`, `scatter-demo` and
//! `validate`. Exit status is 0 on success, 1 when a validation or tolerance
//! check fails and 2 on configuration or I/O errors.

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod output;

use std::process::ExitCode;

pub use args::{Cli, Command};
pub use commands::Outcome;
pub use config::SweepConfig;
pub use error::{CliError, CliResult};

/// Executes a parsed command line.
pub fn execute(command: &Command) -> CliResult<Outcome> {
    let cfg = command.resolve_config()?;
    match command {
        Command::XiMap { .. } => commands::run_xi_map(&cfg),
        Command::DecaySweep { .. } => commands::run_decay_sweep(&cfg),
        Command::OracleCheck { .. } => commands::run_oracle_check(&cfg),
        Command::ScatterDemo { common, .. } => commands::run_scatter_demo(&cfg, common.force),
        Command::Validate { .. } => commands::run_validate(&cfg),
    }
}

pub fn exit_code(result: &CliResult<Outcome>) -> ExitCode {
    match result {
        Ok(outcome) if outcome.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => e.exit_code(),
    }
}
