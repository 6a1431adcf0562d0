//! Command-line front end: verification, single-run reports, parameter
//! sweeps, time evolution and numeric optimization.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or IO error.

pub mod args;
pub mod commands;
pub mod record;
pub mod source;
pub mod sweep;
pub mod verify;

use std::process::ExitCode;

pub use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<qet_core::Error> for CliError {
    fn from(err: qet_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub fn execute(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Verify(a) => verify::cmd_verify(&a),
        Command::Report(a) => commands::cmd_report(&a),
        Command::Sweep(a) => sweep::cmd_sweep(&a),
        Command::Evolve(a) => commands::cmd_evolve(&a),
        Command::Optimize(a) => commands::cmd_optimize(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if !matches!(err, CliError::Verification) {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
