use std::process::ExitCode;

use clap::Parser;

use schur_order::invocation::Cli;
use schur_order::settings::SEED_ENV;
use schur_order::{exit_code_for, run};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli, std::env::var(SEED_ENV).ok()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(schur_order::report::EXIT_USAGE);
            }
        }
        None => print!("{json}"),
    }
    eprint!("{}", report.human_summary());
    ExitCode::from(report.exit_code)
}
