//! Randomized falsification of the three order-`n` classes over sampled pairs
//! `A ⪰ B ⪰ 0`, the samplers behind it, and the rank-one chain between `B`
//! and `A`.
//!
//! Every trial draws from its own ChaCha substream `(seed, trial)`, so verdicts
//! do not depend on thread count or scheduling. A passing verdict is evidence,
//! never proof.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entrywise::apply_entrywise;
use crate::error::{Error, Result};
use crate::linalg::{is_psd, loewner_gap, sym_eig, SymmetricMatrix, DEFAULT_PSD_TOL};
use crate::scalarfn::{ClassVerdict, FunctionClass, ScalarFunction, VerdictWitness, WORKING_BOX};

/// Sampled entries stay below `HEADROOM · α`.
pub const HEADROOM: f64 = 0.95;
pub const DEFAULT_CHECK_TOL: f64 = 1.0e-9;
pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_SEED: u64 = 0x5C4_0D3E;
/// Trials evaluated per parallel batch before looking for a failure.
const CHUNK: usize = 64;

/// Increment shapes `P = A - B` and their sampling weights.
pub const INCREMENT_MIXTURE: [(&str, f64); 3] = [("full_gram", 0.6), ("rank_one", 0.3), ("zero", 0.1)];
/// How the overall size of a sample is drawn, relative to `HEADROOM · α`.
pub const SCALE_MIXTURE: [(&str, f64); 2] = [("uniform(0,1)", 0.5), ("log_uniform(1e-4,1)", 0.5)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub n: usize,
    /// Half-width of the sampling box; `None` uses the function's own domain.
    pub alpha: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub psd_tol: f64,
    pub check_tol: f64,
    pub lambdas: Vec<f64>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n: 3,
            alpha: None,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            psd_tol: DEFAULT_PSD_TOL,
            check_tol: DEFAULT_CHECK_TOL,
            lambdas: vec![0.25, 0.5, 0.75],
        }
    }
}

impl TrialConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self { n, trials, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.psd_tol > 0.0 && self.check_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0) {
                return Err(Error::InvalidArgument(format!("alpha {a} must be positive")));
            }
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::InvalidArgument("lambdas must be a non-empty subset of [0, 1]".into()));
        }
        Ok(())
    }

    /// Sampling half-width for `f`: the configured `α` (which must not exceed
    /// the domain of `f`) or the domain itself.
    pub fn alpha_for(&self, f: &ScalarFunction) -> Result<f64> {
        let dom = f.domain_alpha();
        match self.alpha {
            Some(a) if a > dom => Err(Error::Precondition(format!("alpha {a} exceeds the domain half-width {dom} of {f}"))),
            Some(a) => Ok(a),
            None => Ok(dom),
        }
    }
}

/// Per-trial random stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn working_alpha(alpha: f64) -> f64 {
    if alpha.is_finite() {
        alpha
    } else {
        WORKING_BOX
    }
}

fn gram(n: usize, rng: &mut impl Rng) -> SymmetricMatrix<f64> {
    let g: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    SymmetricMatrix::from_upper(n, |i, j| (0..n).map(|k| g[k * n + i] * g[k * n + j]).sum())
        .expect("Gram matrices are symmetric")
}

fn rank_one(n: usize, rng: &mut impl Rng) -> SymmetricMatrix<f64> {
    let xi: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    SymmetricMatrix::outer(&xi)
}

fn max_diag(m: &SymmetricMatrix<f64>) -> f64 {
    m.diag().into_iter().fold(0.0, f64::max)
}

/// Rescales so the largest diagonal entry equals `target`; the zero matrix is
/// left alone.
fn normalize(m: &SymmetricMatrix<f64>, target: f64) -> SymmetricMatrix<f64> {
    let d = max_diag(m);
    if d > 0.0 {
        m.scale(target / d)
    } else {
        m.clone()
    }
}

/// Fraction of `HEADROOM · α` used by one sample, in `(0, 1)`.
fn draw_size(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let s = if u < SCALE_MIXTURE[0].1 { v } else { (v * 1e-4f64.ln()).exp() };
    s.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
}

/// PSD matrix with every entry inside `(-HEADROOM·α, HEADROOM·α)`: a Gram
/// matrix rescaled so its largest diagonal entry is a random fraction of
/// `HEADROOM·α` (`α = ∞` uses the working box).
pub fn sample_psd(n: usize, alpha: f64, rng: &mut impl Rng) -> Result<SymmetricMatrix<f64>> {
    if n == 0 || !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("need n >= 1 and alpha > 0, got n = {n}, alpha = {alpha}")));
    }
    let target = draw_size(rng) * HEADROOM * working_alpha(alpha);
    Ok(normalize(&gram(n, rng), target))
}

/// An ordered pair `A ⪰ B ⪰ 0` with recorded certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdPair {
    pub a: SymmetricMatrix<f64>,
    pub b: SymmetricMatrix<f64>,
    pub alpha: f64,
    /// Smallest eigenvalue of `B`.
    pub min_eig_b: f64,
    /// Smallest eigenvalue of `A - B`.
    pub min_eig_diff: f64,
    /// Index into [`INCREMENT_MIXTURE`].
    pub increment: usize,
}

impl PsdPair {
    /// Certifies and wraps a given pair.
    pub fn new(a: SymmetricMatrix<f64>, b: SymmetricMatrix<f64>, alpha: f64, tol: f64) -> Result<Self> {
        let (b_ok, min_eig_b) = is_psd(&b, tol)?;
        if !b_ok {
            return Err(Error::NotPsd { min_eig: min_eig_b });
        }
        let diff = a.sub(&b)?;
        let (d_ok, min_eig_diff) = is_psd(&diff, tol)?;
        if !d_ok {
            return Err(Error::NotOrdered { min_eig: min_eig_diff });
        }
        let increment = if diff.max_abs() == 0.0 { 2 } else { 0 };
        let pair = Self { a, b, alpha, min_eig_b, min_eig_diff, increment };
        pair.check_entry_bounds()?;
        Ok(pair)
    }

    fn check_entry_bounds(&self) -> Result<()> {
        for m in [&self.a, &self.b] {
            for i in 0..m.n() {
                for j in 0..m.n() {
                    let v = m.get(i, j);
                    if !(v.abs() < self.alpha) {
                        return Err(Error::EntryOutOfDomain { i, j, value: v, alpha: self.alpha });
                    }
                }
            }
        }
        Ok(())
    }

    /// Recomputes every invariant from scratch.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        Self::new(self.a.clone(), self.b.clone(), self.alpha, tol).map(|_| ())
    }
}

/// `B` a scaled Gram matrix, `A = B + P` with `P` drawn from
/// [`INCREMENT_MIXTURE`], jointly rescaled so the largest diagonal entry of `A`
/// is below `HEADROOM · α`. Since `|b_ij| ≤ max b_ii ≤ max a_ii`, every entry of
/// both matrices is in range.
pub fn sample_psd_pair(n: usize, alpha: f64, rng: &mut impl Rng) -> Result<PsdPair> {
    if n == 0 || !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("need n >= 1 and alpha > 0, got n = {n}, alpha = {alpha}")));
    }
    let target = draw_size(rng) * HEADROOM * working_alpha(alpha);
    let u: f64 = rng.random();
    let b0 = normalize(&gram(n, rng), u);
    let pick: f64 = rng.random();
    let increment = if pick < INCREMENT_MIXTURE[0].1 {
        0
    } else if pick < INCREMENT_MIXTURE[0].1 + INCREMENT_MIXTURE[1].1 {
        1
    } else {
        2
    };
    let v: f64 = rng.random();
    let p0 = match increment {
        0 => normalize(&gram(n, rng), v),
        1 => normalize(&rank_one(n, rng), v),
        _ => SymmetricMatrix::zeros(n),
    };
    let a0 = b0.add(&p0)?;
    let d = max_diag(&a0);
    let s = if d > 0.0 { target / d } else { 1.0 };
    let b = b0.scale(s);
    let a = if increment == 2 { b.clone() } else { a0.scale(s) };
    let min_eig_b = sym_eig(&b)?.values.min();
    let min_eig_diff = loewner_gap(&a, &b)?;
    Ok(PsdPair { a, b, alpha: working_alpha(alpha), min_eig_b, min_eig_diff, increment })
}

/// Two PSD matrices for the spectral bounds, which need `‖A‖, ‖B‖ < α` rather
/// than entry bounds. Half the draws are an ordered pair in random
/// orientation, half are independent. Both are rescaled so the larger
/// operator norm equals the larger diagonal entry before rescaling.
pub fn sample_norm_bounded_pair(
    n: usize,
    alpha: f64,
    rng: &mut impl Rng,
) -> Result<(SymmetricMatrix<f64>, SymmetricMatrix<f64>)> {
    let u: f64 = rng.random();
    let (a, b) = if u < 0.5 {
        let pair = sample_psd_pair(n, alpha, rng)?;
        let flip: bool = rng.random();
        if flip {
            (pair.b, pair.a)
        } else {
            (pair.a, pair.b)
        }
    } else {
        (sample_psd(n, alpha, rng)?, sample_psd(n, alpha, rng)?)
    };
    let norm = a.op_norm()?.max(b.op_norm()?);
    let d = max_diag(&a).max(max_diag(&b));
    let s = if norm > 0.0 { (d / norm).min(1.0) } else { 1.0 };
    Ok((a.scale(s), b.scale(s)))
}

/// `A = A₀ ⪰ A₁ ⪰ ⋯ ⪰ A_n = B` with rank-one steps
/// `A_{k-1} - A_k = λ_k q_k q_kᵗ` from the eigendecomposition of `A - B`.
pub fn chain_decompose(
    a: &SymmetricMatrix<f64>,
    b: &SymmetricMatrix<f64>,
    tol: f64,
) -> Result<Vec<SymmetricMatrix<f64>>> {
    let d = a.sub(b)?;
    let (ordered, min_eig) = is_psd(&d, tol)?;
    if !ordered {
        return Err(Error::NotOrdered { min_eig });
    }
    let n = a.n();
    let eig = sym_eig(&d)?;
    let lambdas = eig.values.as_slice();
    let mut chain = Vec::with_capacity(n + 1);
    chain.push(a.clone());
    for k in 1..n {
        let tail = SymmetricMatrix::from_upper(n, |i, j| {
            (k..n).map(|m| lambdas[m] * eig.vectors[i * n + m] * eig.vectors[j * n + m]).sum()
        })?;
        chain.push(b.add(&tail)?);
    }
    chain.push(b.clone());
    Ok(chain)
}

struct TrialOutcome {
    margin: f64,
    failure: Option<(f64, Option<f64>)>,
    pair: PsdPair,
}

fn frob_scale(ms: &[&SymmetricMatrix<f64>]) -> f64 {
    ms.iter().fold(1.0f64, |s, m| s.max(m.frobenius()))
}

fn min_eig(m: &SymmetricMatrix<f64>) -> Result<f64> {
    Ok(sym_eig(m)?.values.min())
}

fn internal(e: Error) -> Error {
    match e {
        Error::EntryOutOfDomain { .. } | Error::OutOfDomain { .. } | Error::Divergent { .. } => {
            Error::Precondition(format!("sampler produced an entry outside the domain: {e}"))
        }
        other => other,
    }
}

/// Normalized margin of one class condition on one pair, and the `λ` at which
/// the worst convexity gap occurs.
fn evaluate_class(
    f: &ScalarFunction,
    class: FunctionClass,
    pair: &PsdPair,
    lambdas: &[f64],
) -> Result<(f64, Option<f64>)> {
    let fa = apply_entrywise(f, &pair.a).map_err(internal)?;
    let fb = apply_entrywise(f, &pair.b).map_err(internal)?;
    let scale = frob_scale(&[&fa, &fb]);
    match class {
        FunctionClass::Positive => Ok((min_eig(&fa)?.min(min_eig(&fb)?) / scale, None)),
        FunctionClass::Monotone => Ok((min_eig(&fa.sub(&fb)?)? / scale, None)),
        FunctionClass::Convex => {
            let mut worst = (f64::INFINITY, None);
            for &l in lambdas {
                let mix = apply_entrywise(f, &pair.a.lerp(&pair.b, l)?).map_err(internal)?;
                let chord = fa.lerp(&fb, l)?;
                let m = min_eig(&chord.sub(&mix)?)? / scale;
                if m < worst.0 {
                    worst = (m, Some(l));
                }
            }
            Ok(worst)
        }
    }
}

/// Runs `check` on `cfg.trials` sampled pairs in deterministic batches and
/// stops at the first failing trial index.
fn run_trials(
    cfg: &TrialConfig,
    alpha: f64,
    check: impl Fn(&PsdPair) -> Result<(f64, Option<f64>)> + Sync,
) -> Result<ClassVerdict> {
    cfg.validate()?;
    let mut margin = f64::INFINITY;
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + CHUNK).min(cfg.trials);
        let outcomes: Vec<Result<TrialOutcome>> = (start..end)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(cfg.seed, trial);
                let pair = sample_psd_pair(cfg.n, alpha, &mut rng)?;
                let (m, lambda) = check(&pair)?;
                let failure = (m < -cfg.check_tol).then_some((m, lambda));
                Ok(TrialOutcome { margin: m, failure, pair })
            })
            .collect();
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            let outcome = outcome?;
            margin = margin.min(outcome.margin);
            if let Some((m, lambda)) = outcome.failure {
                let trial = start + offset;
                return Ok(ClassVerdict {
                    holds: false,
                    margin,
                    checked: trial + 1,
                    witness: Some(VerdictWitness::Matrices {
                        trial,
                        a: outcome.pair.a.rows(),
                        b: outcome.pair.b.rows(),
                        lambda,
                        min_eigenvalue: m,
                    }),
                });
            }
        }
        start = end;
    }
    Ok(ClassVerdict { holds: true, margin, checked: cfg.trials, witness: None })
}

/// Randomized test of `f` in the given order-`cfg.n` class. The margin is the
/// most negative eigenvalue seen, divided by `max(1, ‖f[A]‖_F, ‖f[B]‖_F)`.
pub fn test_class(f: &ScalarFunction, class: FunctionClass, cfg: &TrialConfig) -> Result<ClassVerdict> {
    let alpha = cfg.alpha_for(f)?;
    run_trials(cfg, alpha, |pair| evaluate_class(f, class, pair, &cfg.lambdas))
}

/// Verdicts on both sides of the derivative correspondences
/// `f ∈ S_conv ⇔ f' ∈ S_mono` and, for `n ≥ 3`, `f ∈ S_mono ⇔ f' ∈ S_pos`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeCrossCheck {
    pub derivative: String,
    pub convex: ClassVerdict,
    pub derivative_monotone: ClassVerdict,
    pub monotone: Option<ClassVerdict>,
    pub derivative_positive: Option<ClassVerdict>,
}

/// Runs both sides of each correspondence on the same seed and sampling box;
/// disagreement is an [`Error::Inconsistent`], since the correspondence is exact.
pub fn cross_check_derivative_relation(f: &ScalarFunction, cfg: &TrialConfig) -> Result<DerivativeCrossCheck> {
    let fp = f.derivative_fn()?;
    let mut shared = cfg.clone();
    shared.alpha = Some(cfg.alpha_for(f)?.min(fp.domain_alpha()));
    let convex = test_class(f, FunctionClass::Convex, &shared)?;
    let derivative_monotone = test_class(&fp, FunctionClass::Monotone, &shared)?;
    if convex.holds != derivative_monotone.holds {
        return Err(Error::Inconsistent(format!(
            "{f} convex: {}, derivative {fp} monotone: {} (n = {})",
            convex.holds, derivative_monotone.holds, cfg.n
        )));
    }
    let (mut monotone, mut derivative_positive) = (None, None);
    if cfg.n >= 3 {
        let m = test_class(f, FunctionClass::Monotone, &shared)?;
        let p = test_class(&fp, FunctionClass::Positive, &shared)?;
        if m.holds != p.holds {
            return Err(Error::Inconsistent(format!(
                "{f} monotone: {}, derivative {fp} positive: {} (n = {})",
                m.holds, p.holds, cfg.n
            )));
        }
        monotone = Some(m);
        derivative_positive = Some(p);
    }
    Ok(DerivativeCrossCheck { derivative: fp.to_string(), convex, derivative_monotone, monotone, derivative_positive })
}

/// Order-doubling check: for sampled `A ⪰ B ⪰ 0` the block matrix
/// `E = [[A, B], [B, B]]` is PSD, `f[E]` is PSD, and `f[A] ⪰ f[B]`.
pub fn test_doubling_inclusion(f: &ScalarFunction, cfg: &TrialConfig) -> Result<ClassVerdict> {
    let alpha = cfg.alpha_for(f)?;
    run_trials(cfg, alpha, |pair| {
        let e = pair.a.doubling_embedding(&pair.b)?;
        let (ok, m) = is_psd(&e, cfg.psd_tol)?;
        if !ok {
            return Err(Error::Precondition(format!("doubling embedding is not PSD (min eigenvalue {m:e})")));
        }
        let fe = apply_entrywise(f, &e).map_err(internal)?;
        let fa = apply_entrywise(f, &pair.a).map_err(internal)?;
        let fb = apply_entrywise(f, &pair.b).map_err(internal)?;
        let scale = frob_scale(&[&fe]);
        let margin = min_eig(&fe)?.min(min_eig(&fa.sub(&fb)?)?) / scale;
        Ok((margin, None))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize, trials: usize) -> TrialConfig {
        TrialConfig::new(n, trials, 42)
    }

    #[test]
    fn single_entry_samples() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..100 {
            let m = sample_psd(1, 2.0, &mut rng).unwrap();
            assert!(m.get(0, 0) >= 0.0 && m.get(0, 0) < 2.0 * HEADROOM);
        }
    }

    #[test]
    fn samples_are_psd_and_inside_the_box() {
        for trial in 0..200 {
            let mut rng = trial_rng(1, trial);
            let m = sample_psd(4, 1.0, &mut rng).unwrap();
            assert!(is_psd(&m, 1e-9).unwrap().0);
            assert!(m.max_abs() < HEADROOM);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = sample_psd(3, 1.0, &mut trial_rng(42, 0)).unwrap();
        let b = sample_psd(3, 1.0, &mut trial_rng(42, 0)).unwrap();
        assert_eq!(a.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>(), b.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        assert_ne!(a, sample_psd(3, 1.0, &mut trial_rng(42, 1)).unwrap());
    }

    #[test]
    fn pairs_cover_every_increment_shape() {
        let mut seen = [0usize; 3];
        for trial in 0..300 {
            let pair = sample_psd_pair(3, f64::INFINITY, &mut trial_rng(5, trial)).unwrap();
            pair.check_invariants(1e-9).unwrap();
            seen[pair.increment] += 1;
            match pair.increment {
                2 => assert_eq!(pair.a, pair.b),
                1 => {
                    let ev = pair.a.sub(&pair.b).unwrap().eigenvalues().unwrap();
                    let big = ev.as_slice().iter().filter(|&&x| x > 1e-9 * ev.max().max(1e-300)).count();
                    assert!(big <= 1, "{ev:?}");
                }
                _ => {}
            }
        }
        assert!(seen.iter().all(|&c| c > 10), "{seen:?}");
    }

    #[test]
    fn chain_steps_are_rank_one() {
        let pair = sample_psd_pair(4, 1.0, &mut trial_rng(3, 0)).unwrap();
        let chain = chain_decompose(&pair.a, &pair.b, 1e-9).unwrap();
        assert_eq!(chain.len(), 5);
        assert_eq!(chain[0], pair.a);
        assert_eq!(chain[4], pair.b);
        for w in chain.windows(2) {
            let ev = w[0].sub(&w[1]).unwrap().eigenvalues().unwrap();
            assert!(ev.as_slice()[1..].iter().all(|x| x.abs() < 1e-12), "{ev:?}");
            assert!(ev.min() > -1e-12);
        }
        let same = chain_decompose(&pair.b, &pair.b, 1e-9).unwrap();
        assert!(same.iter().all(|m| m.sub(&pair.b).unwrap().max_abs() < 1e-15));
        if pair.increment != 2 {
            assert!(matches!(chain_decompose(&pair.b, &pair.a, 1e-9), Err(Error::NotOrdered { .. })));
        }
    }

    #[test]
    fn chain_of_rank_one_gap() {
        let b = SymmetricMatrix::<f64>::identity(3);
        let a = b.add(&SymmetricMatrix::outer(&[1.0, 2.0, 0.5])).unwrap();
        let chain = chain_decompose(&a, &b, 1e-9).unwrap();
        let nontrivial = chain.windows(2).filter(|w| w[0].sub(&w[1]).unwrap().max_abs() > 1e-12).count();
        assert_eq!(nontrivial, 1);
    }

    #[test]
    fn absolute_value_is_positive_of_order_three() {
        let v = test_class(&ScalarFunction::abs_power(1.0).unwrap(), FunctionClass::Positive, &small(3, 500)).unwrap();
        assert!(v.holds, "{v:?}");
        assert_eq!(v.checked, 500);
    }

    #[test]
    fn signed_square_is_monotone_of_order_three() {
        let v = test_class(&ScalarFunction::signed_power(2.0).unwrap(), FunctionClass::Monotone, &small(3, 500)).unwrap();
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn identity_is_convex() {
        for n in 1..=4 {
            let v = test_class(&ScalarFunction::identity(), FunctionClass::Convex, &small(n, 100)).unwrap();
            assert!(v.holds && v.margin > -1e-15, "{v:?}");
        }
    }

    #[test]
    fn negative_slope_at_zero_breaks_monotonicity() {
        let f = ScalarFunction::polynomial(vec![0.0, -0.05, 1.0]).unwrap();
        let v = test_class(&f, FunctionClass::Monotone, &small(2, 500)).unwrap();
        assert!(!v.holds);
        match v.witness {
            Some(VerdictWitness::Matrices { trial, a, b, min_eigenvalue, .. }) => {
                assert_eq!(trial + 1, v.checked);
                assert!(min_eigenvalue < 0.0);
                let a = SymmetricMatrix::from_rows(a).unwrap();
                let b = SymmetricMatrix::from_rows(b).unwrap();
                assert!(loewner_gap(&a, &b).unwrap() > -1e-12);
                let gap = loewner_gap(&apply_entrywise(&f, &a).unwrap(), &apply_entrywise(&f, &b).unwrap()).unwrap();
                assert!(gap < 0.0);
            }
            other => panic!("{other:?}"),
        }
        let convex_ok = ScalarFunction::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(test_class(&convex_ok, FunctionClass::Monotone, &small(2, 500)).unwrap().holds);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let f = ScalarFunction::polynomial(vec![0.0, -0.05, 1.0]).unwrap();
        let a = test_class(&f, FunctionClass::Convex, &small(3, 200)).unwrap();
        let b = test_class(&f, FunctionClass::Convex, &small(3, 200)).unwrap();
        assert_eq!(a, b);
        let a = test_class(&f, FunctionClass::Monotone, &small(2, 300)).unwrap();
        let b = test_class(&f, FunctionClass::Monotone, &small(2, 300)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn derivative_correspondence_for_cube() {
        let r = cross_check_derivative_relation(&ScalarFunction::monomial(3), &small(3, 200)).unwrap();
        assert!(r.convex.holds && r.derivative_monotone.holds);
        assert!(r.monotone.unwrap().holds && r.derivative_positive.unwrap().holds);
        assert!(cross_check_derivative_relation(&ScalarFunction::abs_power(0.5).unwrap(), &small(2, 10)).is_err());
    }

    #[test]
    fn doubling_embedding_for_exp() {
        let v = test_doubling_inclusion(&ScalarFunction::Exp, &small(3, 200)).unwrap();
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn config_validation() {
        let mut c = TrialConfig::default();
        assert!(c.validate().is_ok());
        c.lambdas = vec![1.5];
        assert!(c.validate().is_err());
        c = TrialConfig { trials: 0, ..TrialConfig::default() };
        assert!(c.validate().is_err());
        c = TrialConfig { alpha: Some(2.0), ..TrialConfig::default() };
        assert!(c.alpha_for(&ScalarFunction::NegLog1m).is_err());
        assert_eq!(c.alpha_for(&ScalarFunction::Exp).unwrap(), 2.0);
    }
    #[test]
    fn norm_bounded_pairs_stay_inside() {
        for trial in 0..200 {
            let mut rng = trial_rng(7, trial);
            let (a, b) = sample_norm_bounded_pair(3, 1.0, &mut rng).unwrap();
            for m in [&a, &b] {
                assert!(m.op_norm().unwrap() < HEADROOM + 1e-12);
                assert!(is_psd(m, 1e-12).unwrap().0);
            }
        }
    }
}
