//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use schur_order::commands::execute;
use schur_order::hypothesis::hypothesis_for;
use schur_order::invocation::{Instances, Invocation, TheoremId};
use schur_order::settings::Settings;
use schur_order_core::counterexamples::{convexity_sharpness_witness, power_threshold_witness, SearchConfig};
use schur_order_core::entrywise::{apply_entrywise, functional_calculus};
use schur_order_core::linalg::sym_eig;
use schur_order_core::majorization::{
    verify_diagonal_bound, verify_divided_difference_bound, verify_spectral_domination, weak_majorize,
    InequalityConfig,
};
use schur_order_core::order_testing::{
    cross_check_derivative_relation, sample_norm_bounded_pair, test_class, trial_rng, TrialConfig,
};
use schur_order_core::scalarfn::{certify_class_by_coeffs, div_diff1, div_diff2, parse_fn_spec, DEFAULT_SCAN_DEPTH};
use schur_order_core::{FunctionClass, ScalarFunction, SymmetricMatrix};

type Outcome = Result<String, String>;

const TIME_LIMIT_S: f64 = 60.0;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn f(spec: &str) -> ScalarFunction {
    parse_fn_spec(spec).unwrap()
}

fn m(rows: &[&[f64]]) -> SymmetricMatrix<f64> {
    SymmetricMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_schur-order"));
    c.env_remove("SCHUR_ORDER_SEED");
    c
}

fn norm_fixture() -> Outcome {
    let phi = f("phi:0.5");
    let a = SymmetricMatrix::ones(2).scale(0.5);
    let entry = apply_entrywise(&phi, &a).map_err(|e| e.to_string())?.op_norm().unwrap();
    let spectral = functional_calculus(&phi, &a).map_err(|e| e.to_string())?.op_norm().unwrap();
    ensure(close(entry, 2f64.sqrt(), 1e-9), || format!("entrywise norm {entry}"))?;
    ensure(close(spectral, 1.0, 1e-9), || format!("spectral norm {spectral}"))?;
    let c = verify_spectral_domination(&phi, &a, &InequalityConfig::default()).map_err(|e| e.to_string())?;
    ensure(!c.holds(), || "spectral domination verifier did not report a violation".into())?;
    Ok(format!(
        "entrywise norm {entry:.12}, spectral norm {spectral:.12}, violation at k = {:?}",
        c.verdict.first_violation
    ))
}

fn closing_fixture() -> Outcome {
    let sq = f("series:0,0,1@inf");
    let a = m(&[&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
    let b = SymmetricMatrix::diagonal(&[2.0, 0.0, 0.0]);
    let cfg = InequalityConfig::default();
    let first = verify_divided_difference_bound(&sq, &a, &b, &cfg).map_err(|e| e.to_string())?;
    let diag = verify_diagonal_bound(&sq, &a, &b, &cfg).map_err(|e| e.to_string())?;
    let r2 = 2f64.sqrt();
    for (got, want) in [(&first.rhs, [4.0 * r2, 0.0, 0.0]), (&diag.rhs, [3.0 * r2, 3.0 * r2, 0.0])] {
        ensure(got.iter().zip(want).all(|(x, y)| close(*x, y, 1e-9)), || format!("rhs {got:?}, want {want:?}"))?;
    }
    let ab = weak_majorize(&first.rhs, &diag.rhs, 1e-9).unwrap();
    let ba = weak_majorize(&diag.rhs, &first.rhs, 1e-9).unwrap();
    ensure(!ab.holds && !ba.holds, || "right sides are comparable".into())?;
    Ok(format!("rhs {:?} and {:?}, incomparable", first.rhs, diag.rhs))
}

fn signed_power_fixture() -> Outcome {
    let j = SymmetricMatrix::ones(2);
    let alt = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
    let cfg = InequalityConfig::default();
    let mut notes = Vec::new();
    for (p, should_hold) in [(1.2, false), (1.5, true)] {
        let c = verify_divided_difference_bound(&f(&format!("psi:{p}")), &j, &alt, &cfg).map_err(|e| e.to_string())?;
        let gap = 4.0 - 2.0 * p * 2f64.powf(p - 1.0);
        ensure(close(c.verdict.prefix_margins[1], -gap, 1e-9), || {
            format!("p = {p}: prefix-2 margin {} vs {}", c.verdict.prefix_margins[1], -gap)
        })?;
        ensure(c.holds() == should_hold, || format!("p = {p}: holds = {}", c.holds()))?;
        if !should_hold {
            ensure(gap > 1.2, || format!("gap {gap}"))?;
        }
        notes.push(format!("p = {p}: gap {gap:.6}, holds {}", c.holds()));
    }
    Ok(notes.join("; "))
}

fn power_class_suites() -> Outcome {
    let suites: [(FunctionClass, [(usize, f64); 5]); 3] = [
        (FunctionClass::Positive, [(2, 0.5), (3, 1.0), (3, 1.5), (4, 2.0), (5, 3.0)]),
        (FunctionClass::Monotone, [(2, 1.0), (2, 1.5), (3, 2.0), (3, 2.5), (4, 3.0)]),
        (FunctionClass::Convex, [(2, 2.0), (2, 2.5), (3, 3.0), (3, 3.5), (4, 4.0)]),
    ];
    let mut count = 0;
    let mut worst = f64::INFINITY;
    for (class, pairs) in suites {
        for (n, p) in pairs {
            for head in ["phi", "psi"] {
                let g = f(&format!("{head}:{p}"));
                let cfg = TrialConfig { check_tol: 1e-8, ..TrialConfig::new(n, 500, 0x5EED + n as u64) };
                let v = test_class(&g, class, &cfg).map_err(|e| e.to_string())?;
                ensure(v.holds, || format!("{head}_{p} {class} n = {n}: {v:?}"))?;
                worst = worst.min(v.margin);
                count += 1;
            }
        }
    }
    Ok(format!("{count} suites of 500 trials, smallest normalized eigenvalue {worst:.3e}"))
}

fn sharpness() -> Outcome {
    let cfg = SearchConfig::default();
    let pos = power_threshold_witness(3, 0.5, FunctionClass::Positive, &cfg).map_err(|e| e.to_string())?;
    let conv = convexity_sharpness_witness(2, 1.5, &cfg).map_err(|e| e.to_string())?;
    for w in [&pos, &conv] {
        ensure(w.margin > 1e-6, || format!("margin {} for {}", w.margin, w.description))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, args) in [
        ("fh.json", vec!["counterexample", "fh", "--n", "3", "--p", "0.5", "--class", "spos"]),
        ("lemma52.json", vec!["counterexample", "lemma52", "--n", "2", "--p", "1.5"]),
    ] {
        let path = dir.path().join(name).display().to_string();
        let out = bin().args(&args).args(["--witness-out", &path]).output().unwrap();
        ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
        let out = bin().args(["replay", &path]).output().unwrap();
        ensure(out.status.code() == Some(0), || format!("replay {name}: exit {:?}", out.status.code()))?;
        let r: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure(r["records"][0]["holds"] == true, || format!("replay {name} did not validate"))?;
    }
    Ok(format!("margins {:.3e} (positivity) and {:.3e} (convexity); both files replay", pos.margin, conv.margin))
}

fn coefficient_criterion() -> Outcome {
    let mut trials = 0;
    for spec in ["exp", "neglog1m", "series:0,0,0,1@inf", "series:0,0,1,1@inf"] {
        let g = f(spec);
        for class in FunctionClass::ALL {
            let v = certify_class_by_coeffs(&g, class, DEFAULT_SCAN_DEPTH).map_err(|e| e.to_string())?;
            ensure(v.holds, || format!("{spec}: {class} certificate fails: {v:?}"))?;
            for n in 2..=4 {
                let v = test_class(&g, class, &TrialConfig::new(n, 500, 0xC0EF)).map_err(|e| e.to_string())?;
                ensure(v.holds, || format!("{spec}: {class} n = {n}: {v:?}"))?;
                trials += 500;
            }
        }
    }
    Ok(format!("4 functions certified in 3 classes, {trials} randomized trials clean"))
}

fn bound_candidates(n: usize) -> Vec<String> {
    let mut v: Vec<String> = ["exp", "sum:(exp|series:-1@inf)", "neglog1m", "negpow:0.5", "series:0,1@inf"]
        .iter()
        .chain(&["series:0,0,1@inf", "series:0,0,0,1@inf"])
        .map(|s| s.to_string())
        .collect();
    for p in [n as f64 - 1.0, n as f64 - 0.5, n as f64, n as f64 + 0.5] {
        if p > 0.0 {
            v.push(format!("phi:{p}"));
            v.push(format!("psi:{p}"));
        }
    }
    v
}

fn spectral_bound_suites() -> Outcome {
    let settings = Settings { seed: 0x6163, ..Settings::default() };
    let cfg = InequalityConfig::default();
    let mut runs = 0;
    let mut compared = 0;
    for n in 2..=5 {
        for spec in bound_candidates(n) {
            let g = f(&spec);
            for theorem in [TheoremId::Thm61, TheoremId::Thm63] {
                if !hypothesis_for(theorem, &g, n, false).status.asserted() {
                    continue;
                }
                let inv = Invocation::Verify {
                    theorem,
                    function: g.to_string(),
                    instances: Instances::Sampled { n, trials: 200 },
                    norms: vec![],
                    assume_hypothesis: false,
                };
                let r = execute(&inv, &settings, false).map_err(|e| format!("{spec}: {e:#}"))?.report;
                ensure(r.summary.pass == 200 && r.exit_code == 0, || {
                    format!("{} {spec} n = {n}: {:?}", theorem.as_str(), r.summary)
                })?;
                runs += 1;
            }
            let conv = hypothesis_for(TheoremId::Thm63, &g, n, false).status.asserted();
            if !(conv && g.eval(0.0).unwrap() == 0.0) {
                continue;
            }
            let zero = SymmetricMatrix::zeros(n);
            for t in 0..200 {
                let (a, _) = sample_norm_bounded_pair(n, g.domain_alpha(), &mut trial_rng(settings.seed, t)).unwrap();
                let x = verify_spectral_domination(&g, &a, &cfg).map_err(|e| e.to_string())?;
                let y = verify_divided_difference_bound(&g, &a, &zero, &cfg).map_err(|e| e.to_string())?;
                ensure(x.holds() == y.holds(), || format!("{spec} n = {n} trial {t}: verdicts differ"))?;
                for (u, w) in x.verdict.prefix_margins.iter().zip(&y.verdict.prefix_margins) {
                    ensure(close(*u, *w, 1e-9), || format!("{spec} n = {n} trial {t}: margins {u} vs {w}"))?;
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{runs} suites of 200 instances clean; {compared} zero-second-matrix instances agree"))
}

fn derivative_correspondence() -> Outcome {
    let mut notes = Vec::new();
    for spec in ["series:0,0,0,1@inf", "exp", "psi:2.5"] {
        let g = f(spec);
        for n in 2..=3 {
            for seed in 0..4u64 {
                let cfg = TrialConfig::new(n, 500, 0xD0 + seed);
                let r = cross_check_derivative_relation(&g, &cfg).map_err(|e| format!("{spec} n = {n}: {e}"))?;
                if seed == 0 {
                    notes.push(format!("{spec} n={n}: convex {}", r.convex.holds));
                }
            }
        }
    }
    Ok(format!("verdicts agree on all seeds ({})", notes.join(", ")))
}

fn oracles() -> Outcome {
    let fixtures: [[f64; 3]; 8] = [
        [2.0, 1.0, 2.0],
        [1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [0.5, 0.5, 0.5],
        [2.0, 0.0, 0.0],
        [3.0, 1e-8, 3.0],
        [1.0, 2.0, -3.0],
        [1e-3, 7.0, -2.5],
    ];
    for [p, q, r] in fixtures {
        let mat = m(&[&[p, q], &[q, r]]);
        let ev = sym_eig(&mat).map_err(|e| e.to_string())?.values;
        let mid = 0.5 * (p + r);
        let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        ensure(close(ev.max(), mid + rad, 1e-12) && close(ev.min(), mid - rad, 1e-12), || {
            format!("[[{p},{q}],[{q},{r}]]: {:?}", ev.as_slice())
        })?;
    }
    let (sq, cube) = (f("series:0,0,1@inf"), f("series:0,0,0,1@inf"));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let (x, y, z): (f64, f64, f64) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let checks = [
            (div_diff1(&sq, x, y).unwrap(), x + y),
            (div_diff1(&cube, x, y).unwrap(), x * x + x * y + y * y),
            (div_diff2(&sq, x, y, z).unwrap(), 1.0),
            (div_diff2(&cube, x, y, z).unwrap(), x + y + z),
        ];
        for (got, want) in checks {
            ensure(close(got, want, 1e-10), || format!("({x}, {y}, {z}): {got} vs {want}"))?;
        }
    }
    let mut worst: f64 = 0.0;
    for spec in ["exp", "neglog1m", "negpow:0.5", "phi:2.5", "psi:1.5", "series:1,-2,3@4", "shift:0.2:neglog1m"] {
        let g = f(spec);
        let d = g.derivative_fn().map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let a = g.domain_alpha().min(3.0);
            let x: f64 = rng.random_range(-0.9 * a..0.9 * a);
            if x.abs() < 0.05 {
                continue;
            }
            let h = 1e-5 * x.abs().max(1e-2);
            let fd = (g.eval(x + h).unwrap() - g.eval(x - h).unwrap()) / (2.0 * h);
            let exact = d.eval(x).unwrap();
            let rel = (exact - fd).abs() / exact.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= 1e-6, || format!("{spec} at {x}: {exact} vs {fd}"))?;
        }
    }
    Ok(format!("eigenvalues, divided differences and derivatives match (worst derivative error {worst:.1e})"))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["classify", "--fn", "psi:2.5", "--n", "2,3", "--trials", "200"],
        &["verify", "thm63", "--fn", "exp", "--sample", "n=4,trials=40"],
        &["counterexample", "remark64"],
    ];
    for args in runs {
        let outs: Vec<Vec<u8>> = ["1", "4"]
            .iter()
            .map(|threads| {
                bin().args(args).args(["--seed", "2024"]).env("RAYON_NUM_THREADS", threads).output().unwrap().stdout
            })
            .collect();
        ensure(!outs[0].is_empty() && outs[0] == outs[1], || format!("{} differs between runs", args.join(" ")))?;
    }
    Ok("classify, verify and counterexample reports byte-identical across runs and thread counts".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("norm fixture for a positive-only power", norm_fixture),
        ("closing pair right sides", closing_fixture),
        ("signed power divided difference fixture", signed_power_fixture),
        ("power class suites", power_class_suites),
        ("sharpness witnesses", sharpness),
        ("coefficient criterion", coefficient_criterion),
        ("spectral and divided difference bound suites", spectral_bound_suites),
        ("derivative correspondence", derivative_correspondence),
        ("oracle checks", oracles),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|msg| {
            if secs < TIME_LIMIT_S {
                Ok(msg)
            } else {
                Err(format!("took {secs:.1} s, limit {TIME_LIMIT_S} s"))
            }
        });
        match result {
            Ok(msg) => println!("criterion {:>2} PASS [{secs:6.2} s] {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:6.2} s] {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
