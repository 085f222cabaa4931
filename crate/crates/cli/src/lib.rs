//! Command-line front end of `oscmirror`.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 failed oracle
//! check, 4 output I/O failure. Every error prints one line
//! `error kind=<kind> exit=<code> message="..."` on stderr.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod resolvability;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    let err = CliError::Usage(first);
                    eprintln!("{}", err.diagnostic());
                    err.exit_code()
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command) -> CliResult<()> {
    if let Some(n) = command.common().workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match command {
        Command::Rate(a) => commands::rate(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Surface(a) => commands::surface(a),
        Command::Peaks(a) => commands::peaks(a),
        Command::Validate(c) => commands::validate(c),
        Command::Sweep(a) => commands::sweep(a),
    }
}
