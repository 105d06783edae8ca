use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use schur_order_core::counterexamples::Witness;

use crate::commands::execute;
use crate::invocation::Invocation;
use crate::report::{Draft, Outcome, Report, TOOL_VERSION};
use crate::settings::Settings;

/// Replays a report (re-running its invocation under its stored settings) or
/// re-validates a witness file.
pub fn replay(path: &Path, settings: &Settings) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let invocation = Invocation::Replay { file: path.display().to_string() };
    if v.get("records").is_some() && v.get("invocation").is_some() {
        let stored: Report = serde_json::from_value(v).context("not a valid report")?;
        replay_report(stored, invocation)
    } else if v.get("family").is_some() || v.is_array() {
        let ws: Vec<Witness> = if v.is_array() {
            serde_json::from_value(v).context("not a list of witnesses")?
        } else {
            vec![serde_json::from_value(v).context("not a valid witness")?]
        };
        Ok(revalidate_witnesses(&ws, settings.clone(), invocation))
    } else {
        bail!("{} is neither a report nor a witness file", path.display())
    }
}

fn replay_report(stored: Report, invocation: Invocation) -> Result<Report> {
    let config = stored.config.clone();
    config.validate().context("stored config is invalid")?;
    let timing = stored.records.iter().any(|r| r.runtime_ms.is_some());
    let mut out = Report::new(invocation, config.clone());
    if stored.tool_version != TOOL_VERSION {
        out.warnings.push(format!("report was written by version {}, replaying with {TOOL_VERSION}", stored.tool_version));
    }
    let hash_ok = config.hash() == stored.config_hash;
    out.push(Draft {
        module: "cli",
        check: "config_hash".into(),
        anchor: "replay".into(),
        holds: hash_ok,
        outcome: if hash_ok { Outcome::Pass } else { Outcome::Flagged },
        margins: vec![],
        details: json!({ "label": "config hash", "stored": stored.config_hash, "recomputed": config.hash() }),
        runtime_ms: None,
    });
    let fresh = execute(&stored.invocation, &config, timing)?.report;
    let same_count = fresh.records.len() == stored.records.len();
    for (i, old) in stored.records.iter().enumerate() {
        let new = fresh.records.get(i);
        let identical = new.is_some_and(|r| {
            serde_json::to_string(&r.without_runtime()).ok() == serde_json::to_string(&old.without_runtime()).ok()
        });
        out.push(Draft {
            module: "cli",
            check: "record".into(),
            anchor: "replay".into(),
            holds: identical,
            outcome: if identical { Outcome::Pass } else { Outcome::Flagged },
            margins: vec![],
            details: json!({
                "label": format!("record {i} {}/{}", old.module, old.check),
                "index": i,
                "identical": identical,
            }),
            runtime_ms: None,
        });
    }
    let tail_ok = same_count && fresh.exit_code == stored.exit_code;
    out.push(Draft {
        module: "cli",
        check: "record_count_and_exit".into(),
        anchor: "replay".into(),
        holds: tail_ok,
        outcome: if tail_ok { Outcome::Pass } else { Outcome::Flagged },
        margins: vec![],
        details: json!({
            "label": "record count and exit code",
            "stored": [stored.records.len(), stored.exit_code],
            "replayed": [fresh.records.len(), fresh.exit_code],
        }),
        runtime_ms: None,
    });
    Ok(out.finish())
}

fn revalidate_witnesses(ws: &[Witness], config: Settings, invocation: Invocation) -> Report {
    let mut out = Report::new(invocation, config);
    for w in ws {
        let r = w.revalidate(out.config.check_tol);
        let holds = r.is_ok();
        out.push(Draft {
            module: "counterexamples",
            check: "revalidate".into(),
            anchor: "replay".into(),
            holds,
            outcome: if holds { Outcome::Pass } else { Outcome::Flagged },
            margins: vec![w.margin],
            details: json!({
                "label": w.description,
                "result": match r {
                    Ok(ok) => serde_json::to_value(ok).expect("serializable"),
                    Err(e) => Value::String(e.to_string()),
                },
            }),
            runtime_ms: None,
        });
    }
    out.finish()
}
