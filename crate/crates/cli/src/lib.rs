//! `ana` command-line runner: parse flags and an optional config file, then
//! drive the harness.

pub mod config_file;
pub mod execute;
pub mod invocation;

use std::ffi::OsString;

pub use execute::execute;
pub use invocation::{parse, CliInvocation, Settings, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DIVERGENCE: u8 = 2;
pub const EXIT_UNKNOWN_FUNCTION: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Failure carrying its exit code. The message goes to stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<ana_core::AnaError> for CliError {
    fn from(err: ana_core::AnaError) -> Self {
        let code = match err {
            ana_core::AnaError::UnknownFunction { .. } => EXIT_UNKNOWN_FUNCTION,
            ana_core::AnaError::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::io(err.to_string())
    }
}

pub fn main_with<I, S>(args: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let invocation = match parse(args) {
        Ok(inv) => inv,
        Err(invocation::ParseOutcome::Display(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(invocation::ParseOutcome::Failed(err)) => {
            eprintln!("error: {}", err.message);
            return err.code;
        }
    };
    match execute(&invocation) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}
