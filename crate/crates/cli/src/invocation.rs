//! Command-line grammar and its resolved, replayable form.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use schur_order_core::linalg::read_matrix_csv;
use schur_order_core::scalarfn::parse_fn_spec;
use schur_order_core::{FunctionClass, NormKind};

#[derive(Debug, Parser)]
#[command(name = "schur-order", version, about = "Entrywise matrix functions under the positive-semidefinite order")]
pub struct Cli {
    /// Master seed for every random draw (SCHUR_ORDER_SEED overrides it).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative tolerance for inequality checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Trials per randomized check.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// TOML file with `key = value` settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock `runtime_ms` to each record.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify and test membership in the three classes.
    Classify {
        /// Function in the text form, e.g. `phi:2.5` or `series:0,1,1@inf`.
        #[arg(long = "fn")]
        function: String,
        /// Orders to test, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Check a majorization bound on given or sampled matrices.
    Verify {
        theorem: TheoremId,
        #[arg(long = "fn")]
        function: String,
        /// CSV file with the first matrix: a dimension line, then the rows.
        #[arg(long = "A")]
        a: Option<PathBuf>,
        /// CSV file with the second matrix (all bounds but thm61).
        #[arg(long = "B")]
        b: Option<PathBuf>,
        /// `n=<order>[,trials=<count>]`
        #[arg(long, conflicts_with_all = ["a", "b"])]
        sample: Option<String>,
        /// Norms for the norm form of the diagonal bound (`op`, `trace`, `fro`,
        /// `kyfan:<k>`, `schatten:<p>`).
        #[arg(long, value_delimiter = ',')]
        norms: Vec<String>,
        /// Treat the function as satisfying the class hypothesis when that is
        /// not already known.
        #[arg(long)]
        assume_hypothesis: bool,
    },
    /// Build an explicit witness.
    Counterexample {
        kind: CounterexampleKind,
        /// Matrix order (lemma52, fh).
        #[arg(long)]
        n: Option<usize>,
        /// Non-integer power; for remark64, the case (2) exponent.
        #[arg(long)]
        p: Option<f64>,
        /// Class to leave, spos or smono (fh).
        #[arg(long)]
        class: Option<FunctionClass>,
        /// Function to test for affinity (prop12).
        #[arg(long = "fn")]
        function: Option<String>,
        /// Entry size of the 2x2 families (prop12).
        #[arg(long)]
        a: Option<f64>,
        /// Mixing weight in (0, 1) (prop12).
        #[arg(long)]
        lambda: Option<f64>,
        /// Write the witness JSON here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Re-run a report, or re-check a witness file.
    Replay { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Thm61,
    Thm63,
    Prop65,
    Prop66,
    Prop67,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm61 => "thm61",
            TheoremId::Thm63 => "thm63",
            TheoremId::Prop65 => "prop65",
            TheoremId::Prop66 => "prop66",
            TheoremId::Prop67 => "prop67",
        }
    }

    pub fn single_matrix(self) -> bool {
        self == TheoremId::Thm61
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CounterexampleKind {
    Lemma52,
    Fh,
    Remark64,
    Prop12,
}

impl CounterexampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CounterexampleKind::Lemma52 => "lemma52",
            CounterexampleKind::Fh => "fh",
            CounterexampleKind::Remark64 => "remark64",
            CounterexampleKind::Prop12 => "prop12",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Instances {
    Given { a: Vec<Vec<f64>>, b: Option<Vec<Vec<f64>>> },
    Sampled { n: usize, trials: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub class: Option<FunctionClass>,
    pub function: Option<String>,
    pub a: Option<f64>,
    pub lambda: Option<f64>,
}

/// Everything needed to re-run a command; matrices are stored inline and the
/// function in canonical text form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Invocation {
    Classify {
        function: String,
        ns: Vec<usize>,
    },
    Verify {
        theorem: TheoremId,
        function: String,
        instances: Instances,
        norms: Vec<NormKind>,
        assume_hypothesis: bool,
    },
    Counterexample {
        kind: CounterexampleKind,
        params: CounterexampleParams,
    },
    Replay {
        file: String,
    },
}

impl Invocation {
    pub fn name(&self) -> &'static str {
        match self {
            Invocation::Classify { .. } => "classify",
            Invocation::Verify { .. } => "verify",
            Invocation::Counterexample { .. } => "counterexample",
            Invocation::Replay { .. } => "replay",
        }
    }
}

fn canonical_fn(text: &str) -> Result<String> {
    Ok(parse_fn_spec(text).with_context(|| format!("in function {text:?}"))?.to_string())
}

fn read_matrix(path: &Path, warnings: &mut Vec<String>) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read matrix file {}", path.display()))?;
    let m = read_matrix_csv::<f64>(&text).with_context(|| format!("in matrix file {}", path.display()))?;
    if let Some(w) = m.warning {
        warnings.push(format!("{}: {w}", path.display()));
    }
    Ok(m.matrix.rows())
}

/// Parses `n=<order>[,trials=<count>]`.
pub fn parse_sample_spec(text: &str, default_trials: usize) -> Result<(usize, usize)> {
    let mut n = None;
    let mut trials = default_trials;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("expected key=value in --sample, found {part:?}"))?;
        let v: usize = v.trim().parse().with_context(|| format!("--sample {k}: {v:?} is not a count"))?;
        match k.trim() {
            "n" => n = Some(v),
            "trials" => trials = v,
            other => bail!("unknown --sample key {other:?} (expected n, trials)"),
        }
    }
    let n = n.ok_or_else(|| anyhow!("--sample needs n=<order>"))?;
    if n == 0 || trials == 0 {
        bail!("--sample needs n >= 1 and trials >= 1");
    }
    Ok((n, trials))
}

/// Resolves a parsed command line; `warnings` collects non-fatal notes.
pub fn resolve(command: &Command, trials: usize, warnings: &mut Vec<String>) -> Result<Invocation> {
    Ok(match command {
        Command::Classify { function, n } => {
            if n.iter().any(|&k| k == 0) {
                bail!("--n values must be at least 1");
            }
            Invocation::Classify { function: canonical_fn(function)?, ns: n.clone() }
        }
        Command::Verify { theorem, function, a, b, sample, norms, assume_hypothesis } => {
            let instances = match (sample, a) {
                (Some(spec), _) => {
                    let (n, trials) = parse_sample_spec(spec, trials)?;
                    Instances::Sampled { n, trials }
                }
                (None, Some(pa)) => {
                    let a = read_matrix(pa, warnings)?;
                    let b = match b {
                        Some(pb) => Some(read_matrix(pb, warnings)?),
                        None => None,
                    };
                    match (&b, theorem.single_matrix()) {
                        (Some(_), true) => bail!("{} takes a single matrix; drop --B", theorem.as_str()),
                        (None, false) => bail!("{} needs both --A and --B", theorem.as_str()),
                        _ => {}
                    }
                    if b.as_ref().is_some_and(|b| b.len() != a.len()) {
                        bail!("--A and --B have different sizes");
                    }
                    Instances::Given { a, b }
                }
                (None, None) => bail!("give matrices with --A/--B or a sampler with --sample"),
            };
            let norms = norms
                .iter()
                .map(|s| s.parse::<NormKind>().map_err(anyhow::Error::from))
                .collect::<Result<Vec<_>>>()?;
            Invocation::Verify {
                theorem: *theorem,
                function: canonical_fn(function)?,
                instances,
                norms,
                assume_hypothesis: *assume_hypothesis,
            }
        }
        Command::Counterexample { kind, n, p, class, function, a, lambda, witness_out: _ } => {
            let function = function.as_deref().map(canonical_fn).transpose()?;
            Invocation::Counterexample {
                kind: *kind,
                params: CounterexampleParams { n: *n, p: *p, class: *class, function, a: *a, lambda: *lambda },
            }
        }
        Command::Replay { file } => Invocation::Replay { file: file.display().to_string() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_spec() {
        assert_eq!(parse_sample_spec("n=3,trials=50", 500).unwrap(), (3, 50));
        assert_eq!(parse_sample_spec("n=4", 17).unwrap(), (4, 17));
        assert!(parse_sample_spec("trials=5", 1).is_err());
        assert!(parse_sample_spec("n=3,size=2", 1).is_err());
        assert!(parse_sample_spec("n=x", 1).is_err());
        assert!(parse_sample_spec("n=0", 1).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::value_variants() {
            let v = t.to_possible_value().unwrap();
            assert_eq!(v.get_name(), t.as_str());
            assert_eq!(serde_json::to_string(t).unwrap(), format!("\"{}\"", t.as_str()));
        }
        for k in CounterexampleKind::value_variants() {
            assert_eq!(k.to_possible_value().unwrap().get_name(), k.as_str());
        }
    }

    #[test]
    fn cli_grammar() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["schur-order", "classify", "--fn", "exp", "--n", "2,3", "--seed", "4"]).unwrap();
        assert_eq!(cli.seed, Some(4));
        assert!(matches!(cli.command, Command::Classify { ref n, .. } if n == &vec![2, 3]));
        assert!(Cli::try_parse_from(["schur-order", "verify", "thm99", "--fn", "exp"]).is_err());
        assert!(Cli::try_parse_from(["schur-order", "verify", "thm61", "--fn", "exp", "--A", "a", "--sample", "n=2"]).is_err());
    }
}
