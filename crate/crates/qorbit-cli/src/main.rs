//! `qorbit` — locate and trace periodic complex trajectories of the quartic
//! family H = p² + a·x⁴ + b·x^k.
//!
//! Every subcommand writes a CSV data file plus a `<out>.manifest.json`
//! provenance record; reruns with the same arguments produce bitwise
//! identical data files. Nothing is read from the environment or the
//! network.

mod args;
mod ops;
mod output;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too; only real parse errors
            // use stderr and the usage exit code.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match ops::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
