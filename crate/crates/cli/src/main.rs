use std::process::ExitCode;

use clap::Parser;
use qet_cli::{execute, Cli};

fn main() -> ExitCode {
    execute(Cli::parse())
}
