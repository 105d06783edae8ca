//! Explicit witnesses for the sharpness of the fractional-power thresholds,
//! for the necessity of the hypotheses in the majorization bounds, and for the
//! need to restrict to `A ⪰ B ⪰ 0` in the class definitions.
//!
//! Every witness stores its matrices and a [`Claim`]; [`Witness::revalidate`]
//! recomputes the violated quantity from scratch.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::entrywise::{apply_entrywise, functional_calculus};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, sym_eig, SymmetricMatrix, DEFAULT_PSD_TOL};
use crate::majorization::{verify_divided_difference_bound, InequalityConfig};
use crate::scalarfn::{binomial, parse_fn_spec, FunctionClass, ScalarFunction};

/// Number of points `t_k = 2^{-k} / n²` scanned by the moment-family searches.
pub const T_GRID_POINTS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// A witness must violate its inequality by more than `10 · check_tol · scale`.
    pub check_tol: f64,
    pub psd_tol: f64,
    pub grid_points: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { check_tol: 1e-9, psd_tol: DEFAULT_PSD_TOL, grid_points: T_GRID_POINTS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessFamily {
    ConvexitySharpness,
    PowerThreshold,
    HypothesisNecessity,
    Affinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedSign {
    Negative,
    NonNegative,
}

impl ExpectedSign {
    pub fn matches(self, x: f64) -> bool {
        match self {
            ExpectedSign::Negative => x < 0.0,
            ExpectedSign::NonNegative => x >= 0.0,
        }
    }
}

/// The inequality a witness is about, and how its quantity is computed from
/// `matrices = [A, B, ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Claim {
    /// `A ⪰ 0`; quantity `λ_min(f[A])`.
    Positivity,
    /// `A ⪰ B ⪰ 0`; quantity `λ_min(f[A] - f[B])`.
    Monotonicity,
    /// `A, B ⪰ 0` (and `A ⪰ B` when `ordered`); quantity
    /// `λ_min(λf[A] + (1-λ)f[B] - f[λA + (1-λ)B])`.
    Convexity { lambda: f64, ordered: bool },
    /// `A ⪰ B` with no sign condition on `B`; quantity `λ_min(g[A] - g[B])`
    /// for `g = f - f(0)`.
    UnrestrictedMonotonicity,
    /// `A ⪰ 0`; quantity `‖f(A) - f(0)I‖ - ‖f[A] - f(0)J‖` (operator norms).
    NormDomination,
    /// `A, B ⪰ 0`; quantity: smallest prefix margin of
    /// `s(f[A]-f[B]) ≺_w f^{[1]}(λ(A),λ(B)) ∘ s(A-B)`.
    DividedDifferenceBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub family: WitnessFamily,
    pub description: String,
    /// The function in the text form accepted by `parse_fn_spec`.
    pub function: String,
    pub claim: Claim,
    pub matrices: Vec<NamedMatrix>,
    pub eta: Option<Vec<f64>>,
    pub scalar_params: BTreeMap<String, f64>,
    pub violated_quantity: f64,
    pub expected_sign: ExpectedSign,
    /// Normalization applied to `violated_quantity` to get `margin`.
    pub scale: f64,
    /// `|violated_quantity| / scale`.
    pub margin: f64,
}

/// Outcome of re-checking a stored witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Revalidation {
    pub recomputed: f64,
    pub stored: f64,
    pub sign_ok: bool,
}

fn named(name: &str, m: &SymmetricMatrix<f64>) -> NamedMatrix {
    NamedMatrix { name: name.to_string(), rows: m.rows() }
}

fn frob_scale(ms: &[&SymmetricMatrix<f64>]) -> f64 {
    ms.iter().fold(1.0f64, |s, m| s.max(m.frobenius()))
}

fn min_eig(m: &SymmetricMatrix<f64>) -> Result<f64> {
    Ok(sym_eig(m)?.values.min())
}

fn require_psd(m: &SymmetricMatrix<f64>, tol: f64, what: &str) -> Result<()> {
    let (ok, e) = is_psd(m, tol)?;
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!("{what} is not PSD (min eigenvalue {e:e})")))
    }
}

fn require_geq(a: &SymmetricMatrix<f64>, b: &SymmetricMatrix<f64>, tol: f64) -> Result<()> {
    let (ok, e) = is_psd(&a.sub(b)?, tol)?;
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!("claimed A ⪰ B fails (min eigenvalue of A - B {e:e})")))
    }
}

fn minus_f0(f: &ScalarFunction) -> Result<ScalarFunction> {
    Ok(f.clone().plus_constant(-f.eval::<f64>(0.0)?))
}

/// Evaluates a claim, checking its matrix preconditions; returns the quantity
/// and the scale used to normalize it.
pub fn evaluate_claim(
    f: &ScalarFunction,
    claim: &Claim,
    ms: &[SymmetricMatrix<f64>],
    psd_tol: f64,
) -> Result<(f64, f64)> {
    let need = match claim {
        Claim::Positivity | Claim::NormDomination => 1,
        _ => 2,
    };
    if ms.len() < need {
        return Err(Error::Malformed(format!("claim needs {need} matrices, found {}", ms.len())));
    }
    match claim {
        Claim::Positivity => {
            require_psd(&ms[0], psd_tol, "A")?;
            let fa = apply_entrywise(f, &ms[0])?;
            Ok((min_eig(&fa)?, frob_scale(&[&fa])))
        }
        Claim::Monotonicity => {
            require_psd(&ms[1], psd_tol, "B")?;
            require_geq(&ms[0], &ms[1], psd_tol)?;
            let (fa, fb) = (apply_entrywise(f, &ms[0])?, apply_entrywise(f, &ms[1])?);
            Ok((min_eig(&fa.sub(&fb)?)?, frob_scale(&[&fa, &fb])))
        }
        Claim::Convexity { lambda, ordered } => {
            require_psd(&ms[0], psd_tol, "A")?;
            require_psd(&ms[1], psd_tol, "B")?;
            if *ordered {
                require_geq(&ms[0], &ms[1], psd_tol)?;
            }
            let (fa, fb) = (apply_entrywise(f, &ms[0])?, apply_entrywise(f, &ms[1])?);
            let mix = apply_entrywise(f, &ms[0].lerp(&ms[1], *lambda)?)?;
            let chord = fa.lerp(&fb, *lambda)?;
            Ok((min_eig(&chord.sub(&mix)?)?, frob_scale(&[&fa, &fb])))
        }
        Claim::UnrestrictedMonotonicity => {
            require_geq(&ms[0], &ms[1], psd_tol)?;
            let g = minus_f0(f)?;
            let (ga, gb) = (apply_entrywise(&g, &ms[0])?, apply_entrywise(&g, &ms[1])?);
            Ok((min_eig(&ga.sub(&gb)?)?, frob_scale(&[&ga, &gb])))
        }
        Claim::NormDomination => {
            let a = &ms[0];
            require_psd(a, psd_tol, "A")?;
            let n = a.n();
            let f0 = f.eval::<f64>(0.0)?;
            let entrywise = apply_entrywise(f, a)?.sub(&SymmetricMatrix::ones(n).scale(f0))?;
            let spectral = functional_calculus(f, a)?.sub(&SymmetricMatrix::identity(n).scale(f0))?;
            let (le, ls) = (entrywise.op_norm()?, spectral.op_norm()?);
            Ok((ls - le, 1.0f64.max(le).max(ls)))
        }
        Claim::DividedDifferenceBound => {
            let cfg = InequalityConfig { psd_tol, ..InequalityConfig::default() };
            let c = verify_divided_difference_bound(f, &ms[0], &ms[1], &cfg)?;
            let scale = c.lhs.iter().chain(&c.rhs).fold(1.0f64, |s, x| s.max(x.abs()));
            Ok((c.verdict.min_margin(), scale))
        }
    }
}

impl Witness {
    #[allow(clippy::too_many_arguments)]
    fn build(
        family: WitnessFamily,
        description: String,
        f: &ScalarFunction,
        claim: Claim,
        matrices: Vec<(&str, SymmetricMatrix<f64>)>,
        eta: Option<Vec<f64>>,
        scalar_params: BTreeMap<String, f64>,
        expected_sign: ExpectedSign,
        psd_tol: f64,
    ) -> Result<Self> {
        let ms: Vec<SymmetricMatrix<f64>> = matrices.iter().map(|(_, m)| m.clone()).collect();
        let (q, scale) = evaluate_claim(f, &claim, &ms, psd_tol)?;
        Ok(Self {
            family,
            description,
            function: f.to_string(),
            claim,
            matrices: matrices.iter().map(|(n, m)| named(n, m)).collect(),
            eta,
            scalar_params,
            violated_quantity: q,
            expected_sign,
            scale,
            margin: q.abs() / scale,
        })
    }

    pub fn matrices(&self) -> Result<Vec<SymmetricMatrix<f64>>> {
        self.matrices.iter().map(|m| SymmetricMatrix::from_rows(m.rows.clone())).collect()
    }

    /// Re-parses the function, re-checks the matrix preconditions, recomputes
    /// the quantity and compares it (sign and value) with what was stored.
    pub fn revalidate(&self, tol: f64) -> Result<Revalidation> {
        let f = parse_fn_spec(&self.function)?;
        let ms = self.matrices()?;
        let (q, scale) = evaluate_claim(&f, &self.claim, &ms, DEFAULT_PSD_TOL)?;
        let sign_ok = self.expected_sign.matches(q);
        if (q - self.violated_quantity).abs() > tol * scale.max(self.scale) {
            return Err(Error::Inconsistent(format!(
                "recomputed quantity {q:e} differs from stored {:e}",
                self.violated_quantity
            )));
        }
        if !sign_ok {
            return Err(Error::Inconsistent(format!(
                "quantity {q:e} does not have the expected sign {:?}",
                self.expected_sign
            )));
        }
        Ok(Revalidation { recomputed: q, stored: self.violated_quantity, sign_ok })
    }
}

/// Solves `Σ_i i^k η_i = 0` for `k` in `orthogonal` and `Σ_i i^{normal} η_i = 1`,
/// using the first `orthogonal.len() + 1` coordinates and padding with zeros.
pub fn moment_vector(n: usize, orthogonal: &[u32], normal: u32) -> Result<Vec<f64>> {
    let m = orthogonal.len() + 1;
    if m > n {
        return Err(Error::Precondition(format!(
            "{m} moment conditions need at least {m} coordinates, but n = {n}"
        )));
    }
    let exps: Vec<u32> = orthogonal.iter().copied().chain([normal]).collect();
    let mut aug: Vec<Vec<f64>> = exps
        .iter()
        .enumerate()
        .map(|(r, &k)| {
            let mut row: Vec<f64> = (1..=m).map(|i| (i as f64).powi(k as i32)).collect();
            row.push(if r + 1 == m { 1.0 } else { 0.0 });
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&x, &y| aug[x][col].abs().partial_cmp(&aug[y][col].abs()).expect("finite"))
            .expect("non-empty");
        if aug[piv][col] == 0.0 {
            return Err(Error::Precondition("moment system is singular".into()));
        }
        aug.swap(col, piv);
        for r in (col + 1)..m {
            let factor = aug[r][col] / aug[col][col];
            for c in col..=m {
                aug[r][c] -= factor * aug[col][c];
            }
        }
    }
    let mut eta = vec![0.0; n];
    for r in (0..m).rev() {
        let s: f64 = ((r + 1)..m).map(|c| aug[r][c] * eta[c]).sum();
        eta[r] = (aug[r][m] - s) / aug[r][r];
    }
    Ok(eta)
}

/// `A_t = [1 + t·ij]`
pub fn moment_family(n: usize, t: f64) -> SymmetricMatrix<f64> {
    SymmetricMatrix::from_upper(n, |i, j| 1.0 + t * ((i + 1) * (j + 1)) as f64).expect("symmetric by construction")
}

/// `q(t) = ⟨φ_p[A_t]η, η⟩`
fn quadratic_form(p: f64, eta: &[f64], t: f64) -> f64 {
    let n = eta.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (1.0 + t * ((i + 1) * (j + 1)) as f64).powf(p) * eta[i] * eta[j];
        }
    }
    s
}

/// `q''(t) = Σ p(p-1)(ij)²(1+tij)^{p-2} η_i η_j`
fn quadratic_form_d2(p: f64, eta: &[f64], t: f64) -> f64 {
    let n = eta.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ij = ((i + 1) * (j + 1)) as f64;
            s += p * (p - 1.0) * ij * ij * (1.0 + t * ij).powf(p - 2.0) * eta[i] * eta[j];
        }
    }
    s
}

/// Central second difference with step `h = t/16`, Richardson-extrapolated.
fn quadratic_form_d2_numeric(p: f64, eta: &[f64], t: f64) -> f64 {
    let d = |h: f64| (quadratic_form(p, eta, t + h) - 2.0 * quadratic_form(p, eta, t) + quadratic_form(p, eta, t - h)) / (h * h);
    let h = t / 16.0;
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn t_grid(n: usize, points: u32) -> impl Iterator<Item = (u32, f64)> {
    let n2 = (n * n) as f64;
    (1..=points).map(move |k| (k, 0.5f64.powi(k as i32) / n2))
}

fn check_fractional(n: usize, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Precondition(format!("p = {p} must be positive")));
    }
    if p.fract() == 0.0 {
        return Err(Error::Precondition(format!("p = {p} must not be an integer")));
    }
    Ok(())
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Two members `A_s ⪯ A_t` of `[1 + t·ij]` at which `φ_p` fails midpoint
/// convexity, for `0 < p < n` not an integer.
///
/// `η` is orthogonal to `(i^k)` for `2 ≤ k ≤ [p]+1` with `Σ i^{[p]+2} η_i = 1`,
/// so `q(t) = ⟨φ_p[A_t]η,η⟩` has `q''(t) = ([p]+2)([p]+1) C(p,[p]+2) t^{[p]} + …`,
/// negative for small `t > 0`. The scan flags grid points where both the
/// analytic and the extrapolated numeric `q''` are negative, then tries the
/// pairs `(0, t)` and `(t/2, t)`.
pub fn convexity_sharpness_witness(n: usize, p: f64, cfg: &SearchConfig) -> Result<Witness> {
    check_fractional(n, p)?;
    if p >= n as f64 {
        return Err(Error::Precondition(format!("need p < n, got p = {p}, n = {n}")));
    }
    let fl = p.floor() as u32;
    let orthogonal: Vec<u32> = (2..=fl + 1).collect();
    let eta = moment_vector(n, &orthogonal, fl + 2)?;
    let f = ScalarFunction::abs_power(p)?;
    let claim = Claim::Convexity { lambda: 0.5, ordered: true };

    for (k, t) in t_grid(n, cfg.grid_points) {
        let analytic = quadratic_form_d2(p, &eta, t);
        let numeric = quadratic_form_d2_numeric(p, &eta, t);
        if !(analytic < 0.0 && numeric < 0.0) {
            continue;
        }
        for s in [0.0, 0.5 * t] {
            let (a, b) = (moment_family(n, t), moment_family(n, s));
            let (q, scale) = evaluate_claim(&f, &claim, &[a.clone(), b.clone()], cfg.psd_tol)?;
            if q < -10.0 * cfg.check_tol * scale {
                let description = format!(
                    "phi_{p} fails midpoint convexity on [1 + t ij] at s = {s:e}, t = {t:e} (n = {n}); \
                     the second derivative of <phi_p[A_t] eta, eta> is negative there"
                );
                let sp = params(&[
                    ("n", n as f64),
                    ("p", p),
                    ("s", s),
                    ("t", t),
                    ("grid_index", k as f64),
                    ("second_derivative_analytic", analytic),
                    ("second_derivative_numeric", numeric),
                    ("leading_coefficient", ((fl + 2) * (fl + 1)) as f64 * binomial(p, fl + 2)),
                ]);
                return Witness::build(
                    WitnessFamily::ConvexitySharpness,
                    description,
                    &f,
                    claim,
                    vec![("A", a), ("B", b)],
                    Some(eta),
                    sp,
                    ExpectedSign::Negative,
                    cfg.psd_tol,
                );
            }
        }
    }
    Err(Error::SearchInconclusive(format!(
        "no convexity violation for phi_{p} at n = {n} on t = 2^-k / n^2, k = 1..{}",
        cfg.grid_points
    )))
}

/// Witness that `φ_p` leaves the positive class (`p < n-2`) or the monotone
/// class (`p < n-1`), on the same `[1 + t·ij]` family.
///
/// Positive: `η ⊥ (i^k)` for `0 ≤ k ≤ [p]+1`, so `q(t) = C(p,[p]+2) t^{[p]+2} + …`
/// and `φ_p[A_t]` has a negative eigenvalue. Monotone: `η ⊥ (i^k)` for
/// `1 ≤ k ≤ [p]+1`, so `q(t) - q(0)` is negative and `φ_p[A_t] ⪰̸ φ_p[J]`.
pub fn power_threshold_witness(n: usize, p: f64, class: FunctionClass, cfg: &SearchConfig) -> Result<Witness> {
    check_fractional(n, p)?;
    let fl = p.floor() as u32;
    let (first, bound, claim) = match class {
        FunctionClass::Positive => (0, 2.0, Claim::Positivity),
        FunctionClass::Monotone => (1, 1.0, Claim::Monotonicity),
        FunctionClass::Convex => {
            return Err(Error::Precondition("use the convexity sharpness witness for the convex class".into()))
        }
    };
    let min_n = if class == FunctionClass::Positive { 3 } else { 2 };
    if n < min_n || p >= n as f64 - bound {
        return Err(Error::Precondition(format!(
            "{class} threshold witness needs n >= {min_n} and p < n - {bound}, got n = {n}, p = {p}"
        )));
    }
    let orthogonal: Vec<u32> = (first..=fl + 1).collect();
    let eta = moment_vector(n, &orthogonal, fl + 2)?;
    let f = ScalarFunction::abs_power(p)?;

    for (k, t) in t_grid(n, cfg.grid_points) {
        let a = moment_family(n, t);
        let candidates: Vec<Vec<(&str, SymmetricMatrix<f64>)>> = match class {
            FunctionClass::Positive => vec![vec![("A", a)]],
            _ => vec![
                vec![("A", a.clone()), ("B", moment_family(n, 0.0))],
                vec![("A", a), ("B", moment_family(n, 0.5 * t))],
            ],
        };
        for ms in candidates {
            let mats: Vec<SymmetricMatrix<f64>> = ms.iter().map(|(_, m)| m.clone()).collect();
            let (q, scale) = evaluate_claim(&f, &claim, &mats, cfg.psd_tol)?;
            if q < -10.0 * cfg.check_tol * scale {
                let s = if mats.len() > 1 { mats[1].get(0, 0) - 1.0 } else { f64::NAN };
                let mut sp = params(&[
                    ("n", n as f64),
                    ("p", p),
                    ("t", t),
                    ("grid_index", k as f64),
                    ("quadratic_form", quadratic_form(p, &eta, t)),
                    ("leading_coefficient", binomial(p, fl + 2)),
                ]);
                if s.is_finite() {
                    sp.insert("s".into(), s);
                }
                let description = format!("phi_{p} is not {class} of order {n}: violation on [1 + t ij] at t = {t:e}");
                return Witness::build(
                    WitnessFamily::PowerThreshold,
                    description,
                    &f,
                    claim,
                    ms,
                    Some(eta),
                    sp,
                    ExpectedSign::Negative,
                    cfg.psd_tol,
                );
            }
        }
    }
    Err(Error::SearchInconclusive(format!(
        "no {class} violation for phi_{p} at n = {n} on t = 2^-k / n^2, k = 1..{}",
        cfg.grid_points
    )))
}

/// Exponent `p*` solving `2^{2-p} = p`: below it `ψ_p` violates the divided
/// difference bound on `J₂` versus `[[1,-1],[-1,1]]`.
pub fn signed_power_bound_threshold() -> f64 {
    let g = |p: f64| 2f64.powf(2.0 - p) - p;
    let (mut lo, mut hi) = (1.0, 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exponents used by [`hypothesis_necessity_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NecessityParams {
    /// `φ_p` with `0 < p < 1`: positive but not monotone at order 2.
    pub norm_p: f64,
    /// `ψ_p` below the threshold of [`signed_power_bound_threshold`].
    pub bound_p: f64,
    /// `ψ_p` above it; expected to satisfy the bound.
    pub control_p: f64,
}

impl Default for NecessityParams {
    fn default() -> Self {
        Self { norm_p: 0.5, bound_p: 1.2, control_p: 1.5 }
    }
}

/// The two fixed examples showing that the class hypotheses of the spectral
/// bounds cannot be dropped, plus a control instance that satisfies the bound.
///
/// 1. `φ_p[½J] = 2^{1-p}·½J` has norm `2^{1-p} > 1 = ‖(½J)^p‖`.
/// 2. For `ψ_p` on `A = J₂`, `B = [[1,-1],[-1,1]]` the bound needs `4 ≤ p·2^p`.
pub fn hypothesis_necessity_suite(params_in: &NecessityParams, cfg: &SearchConfig) -> Result<Vec<Witness>> {
    let NecessityParams { norm_p, bound_p, control_p } = *params_in;
    if !(norm_p > 0.0 && norm_p < 1.0) {
        return Err(Error::Precondition(format!("norm example needs 0 < p < 1, got {norm_p}")));
    }
    let threshold = signed_power_bound_threshold();
    if !(bound_p > 0.0 && bound_p < threshold) || !(control_p >= threshold) {
        return Err(Error::Precondition(format!(
            "need bound p < {threshold:.6} <= control p, got {bound_p} and {control_p}"
        )));
    }
    let half_j = SymmetricMatrix::ones(2).scale(0.5);
    let j2 = SymmetricMatrix::ones(2);
    let alt = SymmetricMatrix::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]])?;

    let phi = ScalarFunction::abs_power(norm_p)?;
    let norm_case = Witness::build(
        WitnessFamily::HypothesisNecessity,
        format!("phi_{norm_p} on J/2: entrywise image has operator norm 2^(1-p) > 1 = norm of the spectral image"),
        &phi,
        Claim::NormDomination,
        vec![("A", half_j)],
        None,
        params(&[("p", norm_p), ("case", 1.0)]),
        ExpectedSign::Negative,
        cfg.psd_tol,
    )?;

    let pair_case = |p: f64, sign: ExpectedSign, what: &str| -> Result<Witness> {
        let psi = ScalarFunction::signed_power(p)?;
        Witness::build(
            WitnessFamily::HypothesisNecessity,
            format!("psi_{p} on J and [[1,-1],[-1,1]]: {what}; the bound needs 4 <= p 2^p"),
            &psi,
            Claim::DividedDifferenceBound,
            vec![("A", j2.clone()), ("B", alt.clone())],
            None,
            params(&[("p", p), ("case", 2.0), ("threshold", threshold), ("rhs_first", p * 2f64.powf(p))]),
            sign,
            cfg.psd_tol,
        )
    };
    Ok(vec![
        norm_case,
        pair_case(bound_p, ExpectedSign::Negative, "the divided difference bound fails")?,
        pair_case(control_p, ExpectedSign::NonNegative, "control, the bound holds")?,
    ])
}

/// One 2×2 family from the affinity argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub name: String,
    pub quantity: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinityReport {
    pub families: Vec<FamilyCheck>,
    /// `g(a) - g(λa) - g((1-λ)a)` with `g = f - f(0)`; zero for affine `f`.
    pub additivity_gap: f64,
    /// `g(-a) + g(a)`; zero for affine `f`.
    pub oddness_gap: f64,
    /// First violated family, in the order of the argument.
    pub witness: Option<Witness>,
}

/// Evaluates the 2×2 families showing that order preservation without
/// `B ⪰ 0`, or convexity without `A ⪰ B`, forces `f` to be affine.
pub fn affinity_witness(f: &ScalarFunction, a: f64, lambda: f64, cfg: &SearchConfig) -> Result<AffinityReport> {
    let alpha = f.domain_alpha();
    if !(a >= 0.0 && a < alpha) {
        return Err(Error::Precondition(format!("need 0 <= a < {alpha}, got {a}")));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Precondition(format!("need 0 < lambda < 1, got {lambda}")));
    }
    let m = |rows: [[f64; 2]; 2]| SymmetricMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect());
    let mono = Claim::UnrestrictedMonotonicity;
    let conv = Claim::Convexity { lambda, ordered: false };
    let zero = SymmetricMatrix::zeros(2);
    let families: Vec<(&str, Claim, SymmetricMatrix<f64>, SymmetricMatrix<f64>)> = vec![
        ("off_diagonal_split", mono.clone(), m([[a, lambda * a], [lambda * a, a]])?, SymmetricMatrix::diagonal(&[(1.0 - lambda) * a; 2])),
        (
            "indefinite_lower",
            mono.clone(),
            m([[lambda * a, (1.0 - lambda) * a], [(1.0 - lambda) * a, lambda * a]])?,
            m([[0.0, a], [a, 0.0]])?,
        ),
        ("alternating_above_zero", mono.clone(), m([[a, -a], [-a, a]])?, zero.clone()),
        ("alternating_below_zero", mono, zero, m([[-a, a], [a, -a]])?),
        ("opposite_off_diagonals", conv, m([[a, a], [a, a]])?, m([[a, -a], [-a, a]])?),
    ];

    let g = minus_f0(f)?;
    let additivity_gap = g.eval(a)? - g.eval(lambda * a)? - g.eval((1.0 - lambda) * a)?;
    let oddness_gap = g.eval(-a)? + g.eval(a)?;

    let mut checks = Vec::new();
    let mut witness = None;
    for (name, claim, big, small) in families {
        let (q, scale) = evaluate_claim(f, &claim, &[big.clone(), small.clone()], cfg.psd_tol)?;
        let violated = q < -10.0 * cfg.check_tol * scale;
        checks.push(FamilyCheck { name: name.to_string(), quantity: q, violated });
        if violated && witness.is_none() {
            witness = Some(Witness::build(
                WitnessFamily::Affinity,
                format!("{f} is not affine: the {name} family violates the unrestricted inequality at a = {a}, lambda = {lambda}"),
                f,
                claim,
                vec![("A", big), ("B", small)],
                None,
                params(&[("a", a), ("lambda", lambda), ("additivity_gap", additivity_gap), ("oddness_gap", oddness_gap)]),
                ExpectedSign::Negative,
                cfg.psd_tol,
            )?);
        }
    }
    Ok(AffinityReport { families: checks, additivity_gap, oddness_gap, witness })
}
