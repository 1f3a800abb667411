//! Command-line front end for `fdrates-core`.
//!
//! Every subcommand writes a CSV table (a `#` line echoing the full
//! configuration, a header row, data rows and an optional `#` summary line)
//! or, with `--format json`, the same content as one JSON object.

use std::ffi::OsString;

use clap::Parser;

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use cli::{Cli, Command};
use error::{AppError, AppResult, EXIT_OK, EXIT_VALIDATION};

fn thread_pool() -> AppResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FDRATES_THREADS") {
        let n = v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| AppError::Usage(format!("FDRATES_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| AppError::Usage(e.to_string()))
}

pub fn execute(command: &Command) -> AppResult<()> {
    match command {
        Command::Constants(a) => commands::constants(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::HpVerify(a) => commands::hp_verify_cmd(a),
        Command::Eigenfunction(a) => commands::eigenfunction(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::EvolveLinear(a) => commands::evolve_linear(a),
        Command::EntropyReport(a) => commands::entropy_report(a),
        Command::Gronwall(a) => commands::gronwall(a),
        Command::Quotient(a) => commands::quotient(a),
        Command::Rescale(a) => commands::rescale(a),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| execute(&cli.command)));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("fdrates: error: {e}");
            e.exit_code()
        }
    }
}
