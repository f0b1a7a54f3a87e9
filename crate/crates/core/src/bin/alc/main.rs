mod args;
mod commands;

use std::process::ExitCode;

use alc_core::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Constraint => 3,
                ErrorKind::Internal => 4,
            })
        }
    }
}
