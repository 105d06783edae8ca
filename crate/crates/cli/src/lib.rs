//! Command-line front end: parses functions, matrices and settings, runs the
//! checks of `schur-order-core`, and assembles JSON reports.

pub mod commands;
pub mod hypothesis;
pub mod invocation;
pub mod replay;
pub mod report;
pub mod settings;

use std::path::Path;

use anyhow::{Context, Result};

use schur_order_core::Error;

use crate::commands::execute;
use crate::invocation::{resolve, Cli, Command};
use crate::report::{Report, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_VIOLATION};
use crate::settings::{Overrides, Settings};

/// Runs a parsed command line. `env_seed` is the raw value of
/// `SCHUR_ORDER_SEED`, if set. Writes the witness file when asked; the report
/// itself is returned for the caller to emit.
pub fn run(cli: &Cli, env_seed: Option<String>) -> Result<Report> {
    let over = Overrides { seed: cli.seed, tol: cli.tol, trials: cli.trials, env_seed };
    let settings = Settings::load(cli.config.as_deref(), &over)?;
    if let Command::Replay { file } = &cli.command {
        return replay::replay(file, &settings);
    }
    let mut warnings = Vec::new();
    let invocation = resolve(&cli.command, settings.trials, &mut warnings)?;
    let mut exec = execute(&invocation, &settings, cli.timing)?;
    exec.report.warnings.extend(warnings);
    if let Command::Counterexample { witness_out: Some(path), .. } = &cli.command {
        write_witnesses(path, &exec.witnesses)?;
    }
    Ok(exec.report)
}

fn write_witnesses(path: &Path, ws: &[schur_order_core::counterexamples::Witness]) -> Result<()> {
    let text = match ws {
        [] => return Ok(()),
        [w] => serde_json::to_string_pretty(w)?,
        _ => serde_json::to_string_pretty(ws)?,
    };
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

/// Exit code for a failed run.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        match cause.downcast_ref::<Error>() {
            Some(Error::SearchInconclusive(_)) => return EXIT_INCONCLUSIVE,
            Some(Error::Inconsistent(_)) => return EXIT_VIOLATION,
            _ => {}
        }
    }
    EXIT_USAGE
}
