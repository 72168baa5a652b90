use std::process::ExitCode;

use clap::Parser;
use dualpricer_cli::args::Cli;
use dualpricer_cli::error::{EXIT_OK, EXIT_USAGE};
use dualpricer_cli::run::execute;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == EXIT_USAGE {
                eprintln!("run `dualpricer {} --help` for usage", cli.command.kind());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
