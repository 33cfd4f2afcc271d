mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Common};
use commands::{CliError, Outcome};

fn emit(common: &Common, outcome: &Outcome) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("JSON values serialize");
    text.push('\n');
    match &common.out {
        Some(path) => {
            std::fs::write(path, text)?;
            for line in &outcome.summary {
                println!("{line}");
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, outcome) = match &cli.command {
        Command::VerifyIdentities(a) => (&a.common, commands::verify_identities(a)),
        Command::SolveTwistor(a) => (&a.common, commands::solve_twistor(a)),
        Command::VerifyTheorem1(a) => (&a.common, commands::verify_theorem1(a)),
    };
    let result = outcome.and_then(|o| emit(common, &o).map(|()| o.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
