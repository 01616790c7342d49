//! Command-line pipeline: build, materialize, query, redact and audit MO|RE
//! knowledge graphs, run competency-question suites and generate fixtures.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

pub mod args;
pub mod commands;
pub mod cq;
pub mod error;
pub mod pipeline;

use std::ffi::OsString;

use clap::Parser;

pub use error::CliError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Parses `argv` and runs the command, printing diagnostics to standard
/// error. Returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
