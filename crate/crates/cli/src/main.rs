use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use irs_noma_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli, &mut std::io::stderr()).context("irs-noma failed");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<CliError>().is_some_and(CliError::is_usage);
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
