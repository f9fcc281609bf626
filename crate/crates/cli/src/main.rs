use clap::Parser;

use semimirror_cli::{execute, exit_code, Cli};

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command);
    match &result {
        Ok(outcome) => eprintln!("{}", outcome.summary),
        Err(e) => eprintln!("error: {e}"),
    }
    exit_code(&result)
}
