//! netcost - classify Kubernetes network traffic, price it under
//! usage-based and capacity-based models, and find where they cross.
//!
//! Exit codes: 0 success (a no-crossing break-even answer is success),
//! 2 input or parse error, 3 configuration error.

mod args;
mod commands;
mod inputs;
mod render;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Output;
use inputs::{load_config, CliError, CliResult};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let config = load_config(cli.config.as_deref())?;
    let output = match &cli.command {
        Command::Classify(args) => commands::classify(args, &config)?,
        Command::Cost(args) => commands::cost(args, &config)?,
        Command::Dimension(args) => commands::dimension(args, &config)?,
        Command::Simulate(args) => commands::simulate(args, &config)?,
        Command::Extrapolate(args) => commands::extrapolate(args)?,
        Command::Breakeven(args) => commands::breakeven(args, &config)?,
        Command::Compare(args) => commands::compare_cmd(args, &config)?,
        Command::Ingest(args) => commands::ingest(&args.source, &config)?,
    };
    let text = match output {
        Output::Report(report) => report.render(cli.format),
        Output::Raw(text) => text,
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
