use std::process::ExitCode;

use chanent::cli::{run, Cli, EXIT_INPUT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = run(&cli);
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    if let Some(report) = &outcome.report {
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, report) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT as u8);
                }
            }
            None => print!("{report}"),
        }
    }
    ExitCode::from(outcome.code as u8)
}
