use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod output;

use config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("varbound: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
