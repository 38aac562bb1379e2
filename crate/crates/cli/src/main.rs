use std::process::ExitCode;

use clap::Parser;
use infoeff_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.into()
        }
    }
}
