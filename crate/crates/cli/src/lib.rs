//! Library side of the `qcrb` binary.

pub mod args;
pub mod commands;
pub mod format;

use std::ffi::OsString;
use std::fs;

use clap::Parser;

use args::{Cli, Command};
use qcrb_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Bounds(a) => (commands::bounds(a), &a.output),
        Command::Sweep(a) => (commands::sweep(a), &a.output),
        Command::Check(a) => (commands::check(a), &a.output),
    };
    let rendered = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            return exit_code(&e);
        }
    };
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, &rendered.text) {
                eprintln!("error: InvalidInput: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{}", rendered.text),
    }
    match rendered.failure {
        Some(msg) => {
            eprintln!("check failed: {msg}");
            EXIT_CHECK_FAILED
        }
        None => EXIT_OK,
    }
}
