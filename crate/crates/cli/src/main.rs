//! `dihedral`: central configurations, potential grids, flow runs, averaging
//! operator checks and the acceptance suite.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 numerical failure
//! (including a failed acceptance criterion or a run stopped early).

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numerical(dihedral_core::Error),
    /// Already reported on stderr.
    Reported,
}

impl CliError {
    fn io(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) | CliError::Reported => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Cc(a) => commands::cmd_cc(a),
        Command::Potential(a) => commands::cmd_potential(a),
        Command::Flow(a) => commands::cmd_flow(a),
        Command::Perron(a) => commands::cmd_perron(a),
        Command::Check(a) => commands::cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Io(m) => eprintln!("i/o error: {m}"),
                CliError::Numerical(err) => eprintln!("numerical failure: {err}"),
                CliError::Reported => {}
            }
            ExitCode::from(e.code())
        }
    }
}
