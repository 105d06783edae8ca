use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use schur_order_core::counterexamples::{
    affinity_witness, convexity_sharpness_witness, hypothesis_necessity_suite, power_threshold_witness,
    NecessityParams, Witness,
};
use schur_order_core::majorization::{
    norm_inequality_report, verify_diagonal_bound, verify_diagonal_second_order_bound, verify_divided_difference_bound,
    verify_second_order_bound, verify_spectral_domination, Comparison, InequalityConfig, SecondOrderComparison,
};
use schur_order_core::order_testing::{sample_norm_bounded_pair, test_class, trial_rng};
use schur_order_core::scalarfn::{certify_class_by_coeffs, known_membership, parse_fn_spec, DEFAULT_SCAN_DEPTH};
use schur_order_core::{Error, FunctionClass, NormKind, ScalarFunction, SymmetricMatrix};

use crate::hypothesis::{hypothesis_for, Hypothesis};
use crate::invocation::{CounterexampleKind, CounterexampleParams, Instances, Invocation, TheoremId};
use crate::report::{Draft, Outcome, Report};
use crate::settings::Settings;

/// A report plus any witnesses built along the way.
pub struct Execution {
    pub report: Report,
    pub witnesses: Vec<Witness>,
}

struct Clock {
    on: bool,
    start: Instant,
}

impl Clock {
    fn start(on: bool) -> Self {
        Self { on, start: Instant::now() }
    }

    fn ms(&self) -> Option<f64> {
        self.on.then(|| self.start.elapsed().as_secs_f64() * 1e3)
    }
}

fn value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn execute(invocation: &Invocation, settings: &Settings, timing: bool) -> Result<Execution> {
    let mut report = Report::new(invocation.clone(), settings.clone());
    let mut witnesses = Vec::new();
    match invocation {
        Invocation::Classify { function, ns } => classify(&mut report, function, ns, settings, timing)?,
        Invocation::Verify { theorem, function, instances, norms, assume_hypothesis } => {
            verify(&mut report, *theorem, function, instances, norms, *assume_hypothesis, settings, timing)?
        }
        Invocation::Counterexample { kind, params } => {
            witnesses = counterexample(&mut report, *kind, params, settings, timing)?
        }
        Invocation::Replay { .. } => bail!("a replay cannot be replayed"),
    }
    Ok(Execution { report: report.finish(), witnesses })
}

fn classify(report: &mut Report, function: &str, ns: &[usize], settings: &Settings, timing: bool) -> Result<()> {
    let f = parse_fn_spec(function)?;
    if f.series_covers_domain() {
        for class in FunctionClass::ALL {
            let clock = Clock::start(timing);
            let v = certify_class_by_coeffs(&f, class, DEFAULT_SCAN_DEPTH)?;
            report.push(Draft {
                module: "scalarfn",
                check: "coefficient_certificate".into(),
                anchor: "coefficient-criterion".into(),
                holds: v.holds,
                outcome: if v.holds { Outcome::Pass } else { Outcome::Fail },
                margins: vec![v.margin],
                details: json!({ "label": class.as_str(), "class": class, "depth": DEFAULT_SCAN_DEPTH, "verdict": v }),
                runtime_ms: clock.ms(),
            });
        }
    } else {
        report.warnings.push(format!("{f}: no coefficient certificate (Taylor series at 0 does not cover the domain)"));
    }
    for &n in ns {
        let cfg = settings.trial_config(n);
        for class in FunctionClass::ALL {
            let clock = Clock::start(timing);
            let v = test_class(&f, class, &cfg)?;
            let membership = known_membership(&f, class, n);
            let outcome = match (v.holds, membership.is_member()) {
                (true, _) => Outcome::Pass,
                (false, true) => Outcome::Flagged,
                (false, false) => Outcome::Fail,
            };
            report.push(Draft {
                module: "order-testing",
                check: "test_class".into(),
                anchor: "class-definition".into(),
                holds: v.holds,
                outcome,
                margins: vec![v.margin],
                details: json!({
                    "label": format!("{} n={n}", class.as_str()),
                    "n": n,
                    "class": class,
                    "known": membership,
                    "trials": cfg.trials,
                    "verdict": v,
                }),
                runtime_ms: clock.ms(),
            });
        }
    }
    Ok(())
}

fn to_matrix(rows: &[Vec<f64>]) -> Result<SymmetricMatrix<f64>> {
    Ok(SymmetricMatrix::from_rows(rows.to_vec())?)
}

enum Checked {
    First(Comparison<f64>),
    Second(SecondOrderComparison<f64>),
}

impl Checked {
    fn holds(&self) -> bool {
        match self {
            Checked::First(c) => c.holds(),
            Checked::Second(c) => c.holds(),
        }
    }

    fn margins(&self) -> Vec<f64> {
        match self {
            Checked::First(c) => c.verdict.prefix_margins.clone(),
            Checked::Second(c) => {
                vec![c.hadamard_form.verdict.min_margin(), c.square_form.verdict.min_margin(), c.chain.verdict.min_margin()]
            }
        }
    }

    fn details(&self) -> Value {
        match self {
            Checked::First(c) => value(c),
            Checked::Second(c) => value(c),
        }
    }
}

fn check_instance(
    theorem: TheoremId,
    f: &ScalarFunction,
    a: &SymmetricMatrix<f64>,
    b: Option<&SymmetricMatrix<f64>>,
    cfg: &InequalityConfig,
) -> Result<Checked> {
    let pair = || b.ok_or_else(|| anyhow!("{} needs a second matrix", theorem.as_str()));
    Ok(match theorem {
        TheoremId::Thm61 => Checked::First(verify_spectral_domination(f, a, cfg)?),
        TheoremId::Thm63 => Checked::First(verify_divided_difference_bound(f, a, pair()?, cfg)?),
        TheoremId::Prop65 => Checked::Second(verify_second_order_bound(f, a, pair()?, cfg)?),
        TheoremId::Prop66 => Checked::First(verify_diagonal_bound(f, a, pair()?, cfg)?),
        TheoremId::Prop67 => Checked::Second(verify_diagonal_second_order_bound(f, a, pair()?, cfg)?),
    })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    report: &mut Report,
    theorem: TheoremId,
    function: &str,
    instances: &Instances,
    norms: &[NormKind],
    assume: bool,
    settings: &Settings,
    timing: bool,
) -> Result<()> {
    let f = parse_fn_spec(function)?;
    let cfg = InequalityConfig { check_tol: settings.check_tol, psd_tol: settings.psd_tol };
    let list: Vec<(Option<usize>, SymmetricMatrix<f64>, Option<SymmetricMatrix<f64>>)> = match instances {
        Instances::Given { a, b } => vec![(None, to_matrix(a)?, b.as_deref().map(to_matrix).transpose()?)],
        Instances::Sampled { n, trials } => {
            let alpha = settings.trial_config(*n).alpha_for(&f)?;
            (0..*trials)
                .map(|t| {
                    let (a, b) = sample_norm_bounded_pair(*n, alpha, &mut trial_rng(settings.seed, t))?;
                    Ok((Some(t), a, (!theorem.single_matrix()).then_some(b)))
                })
                .collect::<Result<_>>()?
        }
    };
    let n = list.first().map(|(_, a, _)| a.n()).unwrap_or(0);
    let hyp = hypothesis_for(theorem, &f, n, assume);
    let judge = |holds: bool, hyp: &Hypothesis| match (holds, hyp.status.asserted()) {
        (true, _) => Outcome::Pass,
        (false, true) => Outcome::Flagged,
        (false, false) => Outcome::Fail,
    };
    for (trial, a, b) in &list {
        let label = match trial {
            Some(t) => format!("n={n} trial={t}"),
            None => format!("n={n} given"),
        };
        let clock = Clock::start(timing);
        let checked = check_instance(theorem, &f, a, b.as_ref(), &cfg)
            .with_context(|| format!("{} on {label}", theorem.as_str()))?;
        let holds = checked.holds();
        report.push(Draft {
            module: "majorization",
            check: theorem.as_str().into(),
            anchor: theorem.as_str().into(),
            holds,
            outcome: judge(holds, &hyp),
            margins: checked.margins(),
            details: json!({
                "label": label,
                "theorem": theorem,
                "n": n,
                "trial": trial,
                "hypothesis": hyp,
                "a": a.rows(),
                "b": b.as_ref().map(SymmetricMatrix::rows),
                "comparison": checked.details(),
            }),
            runtime_ms: clock.ms(),
        });
        if !norms.is_empty() {
            let b = b.as_ref().ok_or_else(|| anyhow!("--norms needs a pair of matrices"))?;
            let clock = Clock::start(timing);
            let rows = norm_inequality_report(&f, a, b, norms, &cfg)?;
            let norm_hyp = hypothesis_for(TheoremId::Prop66, &f, n, assume);
            let holds = rows.iter().all(|r| r.slack >= -cfg.check_tol * r.rhs.abs().max(1.0));
            report.push(Draft {
                module: "majorization",
                check: "norm_inequality".into(),
                anchor: TheoremId::Prop66.as_str().into(),
                holds,
                outcome: judge(holds, &norm_hyp),
                margins: rows.iter().map(|r| r.slack).collect(),
                details: json!({ "label": label, "n": n, "trial": trial, "hypothesis": norm_hyp, "rows": rows }),
                runtime_ms: clock.ms(),
            });
        }
    }
    Ok(())
}

fn need<T: Copy>(x: Option<T>, flag: &str, kind: CounterexampleKind) -> Result<T> {
    x.ok_or_else(|| anyhow!("counterexample {} needs {flag}", kind.as_str()))
}

fn witness_draft(kind: CounterexampleKind, w: &Witness, settings: &Settings, timing: &Clock) -> Result<Draft> {
    let check = w.revalidate(settings.check_tol);
    let holds = check.is_ok();
    Ok(Draft {
        module: "counterexamples",
        check: "witness".into(),
        anchor: kind.as_str().into(),
        holds,
        outcome: if holds { Outcome::Pass } else { Outcome::Flagged },
        margins: vec![w.margin],
        details: json!({
            "label": w.description,
            "revalidation": check.map(|r| value(&r)).unwrap_or_else(|e| Value::String(e.to_string())),
            "witness": w,
        }),
        runtime_ms: timing.ms(),
    })
}

fn counterexample(
    report: &mut Report,
    kind: CounterexampleKind,
    params: &CounterexampleParams,
    settings: &Settings,
    timing: bool,
) -> Result<Vec<Witness>> {
    let cfg = settings.search_config();
    let clock = Clock::start(timing);
    let built: Result<Vec<Witness>, Error> = match kind {
        CounterexampleKind::Lemma52 => {
            let (n, p) = (need(params.n, "--n", kind)?, need(params.p, "--p", kind)?);
            convexity_sharpness_witness(n, p, &cfg).map(|w| vec![w])
        }
        CounterexampleKind::Fh => {
            let (n, p) = (need(params.n, "--n", kind)?, need(params.p, "--p", kind)?);
            let class = need(params.class, "--class", kind)?;
            power_threshold_witness(n, p, class, &cfg).map(|w| vec![w])
        }
        CounterexampleKind::Remark64 => {
            let mut np = NecessityParams::default();
            if let Some(p) = params.p {
                np.bound_p = p;
            }
            hypothesis_necessity_suite(&np, &cfg)
        }
        CounterexampleKind::Prop12 => {
            let text = params.function.as_deref().ok_or_else(|| anyhow!("counterexample prop12 needs --fn"))?;
            let f = parse_fn_spec(text)?;
            let a = params.a.unwrap_or(0.5);
            let lambda = params.lambda.unwrap_or(0.5);
            let r = affinity_witness(&f, a, lambda, &cfg)?;
            let gap = r.additivity_gap.abs().max(r.oddness_gap.abs());
            let affine = gap <= settings.check_tol * f.eval::<f64>(a)?.abs().max(1.0);
            let (holds, outcome) = match (&r.witness, affine) {
                (Some(_), _) | (None, true) => (true, Outcome::Pass),
                (None, false) => (false, Outcome::Inconclusive),
            };
            report.push(Draft {
                module: "counterexamples",
                check: "affinity_families".into(),
                anchor: kind.as_str().into(),
                holds,
                outcome,
                margins: r.families.iter().map(|c| c.quantity).collect(),
                details: json!({
                    "label": if affine { "affine, no family violated" } else { "not affine" },
                    "affine": affine,
                    "families": r.families,
                    "additivity_gap": r.additivity_gap,
                    "oddness_gap": r.oddness_gap,
                }),
                runtime_ms: clock.ms(),
            });
            Ok(r.witness.into_iter().collect())
        }
    };
    let witnesses = match built {
        Ok(ws) => ws,
        Err(Error::SearchInconclusive(msg)) => {
            report.push(Draft {
                module: "counterexamples",
                check: "witness".into(),
                anchor: kind.as_str().into(),
                holds: false,
                outcome: Outcome::Inconclusive,
                margins: vec![],
                details: json!({ "label": "search inconclusive", "reason": msg }),
                runtime_ms: clock.ms(),
            });
            return Ok(vec![]);
        }
        Err(e) => return Err(e.into()),
    };
    for w in &witnesses {
        let d = witness_draft(kind, w, settings, &clock)?;
        report.push(d);
    }
    Ok(witnesses)
}
