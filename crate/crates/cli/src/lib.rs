//! Command-line front end: argument types, command dispatch and result
//! rendering. The binary is a thin wrapper over [`run`].

pub mod args;
pub mod commands;
pub mod output;

use clap::Parser;

pub use args::Cli;
pub use commands::{execute, CliError};
pub use output::{Check, Comparison, RunResult};

/// Parses `argv`, runs the command, writes the result and returns the exit
/// code (0 pass, 1 failed check, 2 usage error).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, &cli.output) {
        Ok(result) => {
            if let Err(e) = result.emit(&cli.output) {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            result.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
