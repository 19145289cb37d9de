use std::process::ExitCode;

use clap::Parser;
use pickone_lab::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pickone-lab: {e:#}");
            ExitCode::from(2)
        }
    }
}
