use std::process::ExitCode;

use clap::Parser;
use cyquiver::cli::{error_outcome, run_source, Cli, EXIT_INPUT};
use cyquiver::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.into();
    let outcome = match std::fs::read_to_string(cli.command.file()) {
        Ok(source) => run_source(&cli.command, &source, format),
        Err(e) => error_outcome(
            &Error::InvalidInput(format!("cannot read {}: {e}", cli.command.file().display())),
            format,
        ),
    };
    if outcome.status == EXIT_INPUT {
        eprint!("{}", outcome.output);
    } else {
        print!("{}", outcome.output);
    }
    ExitCode::from(outcome.status as u8)
}
