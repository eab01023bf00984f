//! `ridgefp` command-line front end.
//!
//! Exit codes: 0 on success or convergence, 1 on bad flags or I/O errors,
//! 2 when a solve hits its iteration limit, 3 when it diverges.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Spectrum(a) => commands::cmd_spectrum(a),
        Command::SweepTheta(a) => commands::cmd_sweep_theta(a),
        Command::Bench(a) => commands::cmd_bench(a),
        Command::Gen(a) => commands::cmd_gen(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
