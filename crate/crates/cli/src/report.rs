use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use schur_order_core::order_testing::{HEADROOM, INCREMENT_MIXTURE, SCALE_MIXTURE};

use crate::invocation::Invocation;
use crate::settings::Settings;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_CLEAN: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    /// The checked property fails, with no claim that it should hold.
    Fail,
    /// Fails although its hypothesis was certified or asserted, or two
    /// independent checks disagree.
    Flagged,
    Inconclusive,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Flagged => "FLAG",
            Outcome::Inconclusive => "????",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub module: String,
    pub check: String,
    pub anchor: String,
    pub holds: bool,
    pub outcome: Outcome,
    pub margins: Vec<f64>,
    pub details: Value,
    pub seed: u64,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Record {
    pub fn without_runtime(&self) -> Self {
        Self { runtime_ms: None, ..self.clone() }
    }
}

/// Record under construction; seed and hash are filled in by the report.
pub struct Draft {
    pub module: &'static str,
    pub check: String,
    pub anchor: String,
    pub holds: bool,
    pub outcome: Outcome,
    pub margins: Vec<f64>,
    pub details: Value,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerInfo {
    pub increment_mixture: Vec<(String, f64)>,
    pub scale_mixture: Vec<(String, f64)>,
    pub headroom: f64,
}

impl Default for SamplerInfo {
    fn default() -> Self {
        let own = |m: &[(&str, f64)]| m.iter().map(|(k, w)| (k.to_string(), *w)).collect();
        Self { increment_mixture: own(&INCREMENT_MIXTURE), scale_mixture: own(&SCALE_MIXTURE), headroom: HEADROOM }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub seed: u64,
    pub command: String,
    pub invocation: Invocation,
    pub config: Settings,
    pub config_hash: String,
    pub sampler: SamplerInfo,
    pub records: Vec<Record>,
    pub warnings: Vec<String>,
    pub summary: Summary,
    pub exit_code: u8,
}

impl Report {
    pub fn new(invocation: Invocation, config: Settings) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed: config.seed,
            command: invocation.name().to_string(),
            invocation,
            config_hash: config.hash(),
            config,
            sampler: SamplerInfo::default(),
            records: Vec::new(),
            warnings: Vec::new(),
            summary: Summary::default(),
            exit_code: EXIT_CLEAN,
        }
    }

    pub fn push(&mut self, d: Draft) {
        self.records.push(Record {
            module: d.module.to_string(),
            check: d.check,
            anchor: d.anchor,
            holds: d.holds,
            outcome: d.outcome,
            margins: d.margins,
            details: d.details,
            seed: self.seed,
            config_hash: self.config_hash.clone(),
            runtime_ms: d.runtime_ms,
        });
    }

    /// Fills in the summary and the exit code.
    pub fn finish(mut self) -> Self {
        let mut s = Summary { records: self.records.len(), ..Summary::default() };
        for r in &self.records {
            match r.outcome {
                Outcome::Pass => s.pass += 1,
                Outcome::Fail => s.fail += 1,
                Outcome::Flagged => s.flagged += 1,
                Outcome::Inconclusive => s.inconclusive += 1,
            }
        }
        self.exit_code = if s.flagged > 0 {
            EXIT_VIOLATION
        } else if s.inconclusive > 0 {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_CLEAN
        };
        self.summary = s;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Short text for standard error; passing records are listed only for
    /// small reports.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        let all = self.records.len() <= 12;
        for r in self.records.iter().filter(|r| all || r.outcome != Outcome::Pass) {
            let worst = r.margins.iter().copied().fold(f64::INFINITY, f64::min);
            let _ = write!(out, "[{}] {}/{} ({})", r.outcome.label(), r.module, r.check, r.anchor);
            if let Some(tag) = r.details.get("label").and_then(Value::as_str) {
                let _ = write!(out, " {tag}");
            }
            if worst.is_finite() {
                let _ = write!(out, " min margin {worst:.3e}");
            }
            out.push('\n');
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{}: {} records, {} pass, {} fail, {} flagged, {} inconclusive (seed {}, config {}); exit {}",
            self.command,
            s.records,
            s.pass,
            s.fail,
            s.flagged,
            s.inconclusive,
            self.seed,
            &self.config_hash[..12],
            self.exit_code
        );
        out
    }
}
