//! Order-2 characterizations checked on finite grids, and the verdict type
//! shared with the randomized testers. A grid verdict means "holds on the
//! grid"; it is never a proof.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ScalarFunction;

pub const DEFAULT_GRID_POINTS: usize = 64;
/// Stand-in half-width for grids and samplers when `α = ∞`.
pub const WORKING_BOX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionClass {
    /// `A ⪰ 0 ⟹ f[A] ⪰ 0`
    Positive,
    /// `A ⪰ B ⪰ 0 ⟹ f[A] ⪰ f[B]`
    Monotone,
    /// `A ⪰ B ⪰ 0 ⟹ f[λA + (1-λ)B] ⪯ λf[A] + (1-λ)f[B]`
    Convex,
}

impl FunctionClass {
    pub const ALL: [FunctionClass; 3] = [FunctionClass::Positive, FunctionClass::Monotone, FunctionClass::Convex];

    /// Index of the first Taylor coefficient whose sign matters.
    pub fn first_coefficient(self) -> u32 {
        match self {
            FunctionClass::Positive => 0,
            FunctionClass::Monotone => 1,
            FunctionClass::Convex => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionClass::Positive => "s-pos",
            FunctionClass::Monotone => "s-mono",
            FunctionClass::Convex => "s-conv",
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "spos" | "pos" | "positive" => Ok(FunctionClass::Positive),
            "smono" | "mono" | "monotone" => Ok(FunctionClass::Monotone),
            "sconv" | "conv" | "convex" => Ok(FunctionClass::Convex),
            _ => Err(Error::InvalidArgument(format!("unknown class {s:?} (expected spos, smono or sconv)"))),
        }
    }
}

/// What a failed check points at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VerdictWitness {
    /// First negative Taylor coefficient.
    Coefficient { k: u32, value: f64 },
    /// Grid points at which a scalar condition fails.
    GridPoints { points: Vec<f64>, condition: String },
    /// Sampled matrices at which a matrix inequality fails.
    Matrices {
        trial: usize,
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        lambda: Option<f64>,
        min_eigenvalue: f64,
    },
}

/// Outcome of a class-membership check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub holds: bool,
    /// Smallest normalized slack seen; negative iff something failed.
    pub margin: f64,
    /// Number of elementary checks performed.
    pub checked: usize,
    /// Present only when `holds` is false.
    pub witness: Option<VerdictWitness>,
}

impl ClassVerdict {
    fn pass(margin: f64, checked: usize) -> Self {
        Self { holds: true, margin, checked, witness: None }
    }

    fn fail(margin: f64, checked: usize, points: Vec<f64>, condition: &str) -> Self {
        Self {
            holds: false,
            margin,
            checked,
            witness: Some(VerdictWitness::GridPoints { points, condition: condition.to_string() }),
        }
    }
}

/// `count` logarithmically spaced points in `(0, α)`; `α = ∞` uses
/// [`WORKING_BOX`].
pub fn log_grid(alpha: f64, count: usize) -> Vec<f64> {
    let top = if alpha.is_finite() { alpha } else { WORKING_BOX };
    let (lo, hi) = ((top * 1e-3).ln(), (top * (1.0 - 1e-3)).ln());
    match count {
        0 => Vec::new(),
        1 => vec![(0.5 * (lo + hi)).exp()],
        _ => (0..count).map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp()).collect(),
    }
}

fn positive_grid(f: &ScalarFunction, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let alpha = f.domain_alpha();
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0 && t < alpha)) {
        return Err(Error::OutOfDomain { x: bad, alpha });
    }
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    g.dedup();
    Ok(g)
}

/// Membership of `f|_(0,α)` in the class of nonnegative, non-decreasing,
/// `√`-submultiplicative functions: `f(√(st)) ≤ √(f(s)f(t))` over all grid pairs.
pub fn check_phi_class(f: &ScalarFunction, grid: &[f64], tol: f64) -> Result<ClassVerdict> {
    let g = positive_grid(f, grid)?;
    let vals: Vec<f64> = g.iter().map(|&t| f.eval(t)).collect::<Result<_>>()?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut margin = f64::INFINITY;
    let mut checked = 0;

    for (&t, &v) in g.iter().zip(&vals) {
        checked += 1;
        let m = v / scale;
        margin = margin.min(m);
        if m < -tol {
            return Ok(ClassVerdict::fail(m, checked, vec![t], "f(t) >= 0"));
        }
    }
    for i in 1..g.len() {
        checked += 1;
        let m = (vals[i] - vals[i - 1]) / scale;
        margin = margin.min(m);
        if m < -tol {
            return Ok(ClassVerdict::fail(m, checked, vec![g[i - 1], g[i]], "non-decreasing"));
        }
    }
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            checked += 1;
            let lhs = f.eval((g[i] * g[j]).sqrt())?;
            let rhs = (vals[i] * vals[j]).max(0.0).sqrt();
            let m = (rhs - lhs) / scale;
            margin = margin.min(m);
            if lhs > rhs * (1.0 + tol) + tol * scale {
                return Ok(ClassVerdict::fail(m, checked, vec![g[i], g[j]], "f(sqrt(st)) <= sqrt(f(s) f(t))"));
            }
        }
    }
    Ok(ClassVerdict::pass(margin, checked))
}

/// Smallest discrete second difference of `x ↦ log f(eˣ)` on the log-grid,
/// normalized by the squared spacing; `None` when `f` is not positive on the grid.
pub fn log_convexity_gap(f: &ScalarFunction, grid: &[f64]) -> Result<Option<f64>> {
    let g = positive_grid(f, grid)?;
    let mut logs = Vec::with_capacity(g.len());
    for &t in &g {
        let v = f.eval(t)?;
        if !(v > 0.0) {
            return Ok(None);
        }
        logs.push((t.ln(), v.ln()));
    }
    let mut worst = f64::INFINITY;
    for w in logs.windows(3) {
        let ((x0, y0), (x1, y1), (x2, y2)) = (w[0], w[1], w[2]);
        // divided second difference on a non-uniform grid
        let d = ((y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0)) / (x2 - x0);
        worst = worst.min(d);
    }
    Ok(Some(if worst.is_finite() { worst } else { 0.0 }))
}

/// Order-2 Schur positivity on a grid: the restriction to `(0, α)` passes
/// [`check_phi_class`], `0 ≤ f(0) ≤ f(0+)`, and `|f(-t)| ≤ f(t)`.
pub fn check_spos2(f: &ScalarFunction, grid: &[f64], tol: f64) -> Result<ClassVerdict> {
    let phi = check_phi_class(f, grid, tol)?;
    if !phi.holds {
        return Ok(phi);
    }
    let g = positive_grid(f, grid)?;
    let vals: Vec<f64> = g.iter().map(|&t| f.eval(t)).collect::<Result<_>>()?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut margin = phi.margin;
    let mut checked = phi.checked;

    let f0 = f.eval(0.0)?;
    let right_limit = vals[0];
    checked += 2;
    let m = f0 / scale;
    margin = margin.min(m);
    if m < -tol {
        return Ok(ClassVerdict::fail(m, checked, vec![0.0], "f(0) >= 0"));
    }
    let m = (right_limit - f0) / scale;
    margin = margin.min(m);
    if m < -tol {
        return Ok(ClassVerdict::fail(m, checked, vec![0.0, g[0]], "f(0) <= f(0+)"));
    }
    for (&t, &v) in g.iter().zip(&vals) {
        checked += 1;
        let reflected = f.eval(-t)?.abs();
        let m = (v - reflected) / scale;
        margin = margin.min(m);
        if reflected > v * (1.0 + tol) + tol * scale {
            return Ok(ClassVerdict::fail(m, checked, vec![-t, t], "|f(-t)| <= f(t)"));
        }
    }
    Ok(ClassVerdict::pass(margin, checked))
}

/// Midpoint convexity `g((s+t)/2) ≤ (g(s)+g(t))/2` over all grid pairs.
pub fn check_midpoint_convex(g: impl Fn(f64) -> f64, grid: &[f64], tol: f64) -> Result<ClassVerdict> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("function values on grid".into()));
    }
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut margin = f64::INFINITY;
    let mut checked = 0;
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            checked += 1;
            let mid = g(0.5 * (grid[i] + grid[j]));
            let m = (0.5 * (vals[i] + vals[j]) - mid) / scale;
            margin = margin.min(m);
            if m < -tol {
                return Ok(ClassVerdict::fail(m, checked, vec![grid[i], grid[j]], "midpoint convexity"));
            }
        }
    }
    Ok(ClassVerdict::pass(if margin.is_finite() { margin } else { 0.0 }, checked))
}
