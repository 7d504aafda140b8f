//! Command-line front end for `xeig-core`.
//!
//! [`run`] parses arguments, executes one subcommand and writes the report.
//! Exit codes: 0 on success, 2 on usage errors, 1 on computational errors.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
mod commands;
pub mod parse;
mod report;

pub use report::Report;

/// Environment variable consulted when `--parallelism` is absent.
pub const PARALLELISM_ENV: &str = "XEIG_PARALLELISM";

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl From<xeig_core::Error> for Failure {
    fn from(e: xeig_core::Error) -> Self {
        use xeig_core::Error::*;
        match e {
            Syntax { .. } | InvalidFamily(_) | InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn threads(flag: Option<u32>) -> Result<Option<usize>, Failure> {
    if let Some(n) = flag {
        return Ok(Some(n as usize));
    }
    match std::env::var(PARALLELISM_ENV) {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{} must be a positive integer, got {:?}", PARALLELISM_ENV, text))),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: args::Cli) -> Result<String, Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads(cli.parallelism)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Compute(e.to_string()))?;
    let format = cli.format;
    let report = pool.install(|| commands::execute(cli.command))?;
    report.render(format)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match execute(cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {}", e);
                1
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            1
        }
    }
}
