mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use trendcycle::Error;

use config::{Cli, Command};

/// 1 usage, 2 data, 3 numerical.
fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_numerical() => 3,
        Error::Data(_) | Error::Io(_) | Error::Csv(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Smooth(o) => commands::smooth(o),
        Command::Vintages(o) => commands::vintages_cmd(o),
        Command::Simulate(o) => commands::simulate_cmd(o),
        Command::Coefficients(o) => commands::coefficients(o),
        Command::Confint(o) => commands::confint(o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
