//! `betadom` command-line driver.
//!
//! Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or
//! parameter error, 3 numerical or I/O error.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    // clap reports malformed arguments itself and exits with status 2
    let cli = args::Cli::parse();
    match commands::run(&cli.command) {
        Ok(verdict) if verdict.passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("betadom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
