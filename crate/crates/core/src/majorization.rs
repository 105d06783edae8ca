//! Weak majorization and checkers for the spectral inequalities relating
//! `f[A] - f[B]` to divided differences of `f` and to `A - B`.
//!
//! The checkers never test class membership of `f`; the caller asserts it.

use serde::Serialize;

use crate::entrywise::{apply_entrywise, functional_calculus};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, ui_norm, NormKind, Spectrum, SymmetricMatrix};
use crate::scalar::Scalar;
use crate::scalarfn::{div_diff1, div_diff2, ScalarFunction};

/// Default relative tolerance on prefix sums.
pub const DEFAULT_MAJORIZATION_TOL: f64 = 1.0e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityConfig {
    /// Relative tolerance of the prefix-sum comparison.
    pub check_tol: f64,
    /// Relative tolerance of the `A ⪰ 0` preconditions.
    pub psd_tol: f64,
}

impl Default for InequalityConfig {
    fn default() -> Self {
        Self { check_tol: DEFAULT_MAJORIZATION_TOL, psd_tol: crate::linalg::DEFAULT_PSD_TOL }
    }
}

/// Outcome of `a ≺_w b` (or `a ≺ b`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVerdict<T> {
    pub holds: bool,
    /// `Σ_{i≤k} b_[i] - Σ_{i≤k} a_[i]` for `k = 1..n`.
    pub prefix_margins: Vec<T>,
    /// Smallest failing `k`, 1-based.
    pub first_violation: Option<usize>,
}

impl<T: Scalar> MajorizationVerdict<T> {
    pub fn min_margin(&self) -> T {
        self.prefix_margins.iter().copied().fold(T::infinity(), T::min)
    }
}

pub fn dec_rearrange<T: Scalar>(v: &[T]) -> Result<Spectrum<T>> {
    Spectrum::from_unsorted(v.to_vec())
}

fn prefix_sums<T: Scalar>(s: &Spectrum<T>) -> Vec<T> {
    s.as_slice()
        .iter()
        .scan(T::zero(), |acc, &x| {
            *acc = *acc + x;
            Some(*acc)
        })
        .collect()
}

/// `a ≺_w b`: every prefix sum of the decreasing rearrangement of `a` is at
/// most that of `b`, up to `tol` times the largest prefix-sum magnitude.
pub fn weak_majorize<T: Scalar>(a: &[T], b: &[T], tol: T) -> Result<MajorizationVerdict<T>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    if tol < T::zero() {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }
    let (pa, pb) = (prefix_sums(&dec_rearrange(a)?), prefix_sums(&dec_rearrange(b)?));
    let scale = pa.iter().chain(&pb).fold(T::zero(), |m, x| m.max(x.abs()));
    let prefix_margins: Vec<T> = pa.iter().zip(&pb).map(|(&x, &y)| y - x).collect();
    let first_violation = prefix_margins.iter().position(|&m| m < -tol * scale).map(|k| k + 1);
    Ok(MajorizationVerdict { holds: first_violation.is_none(), prefix_margins, first_violation })
}

/// `a ≺ b`: weak majorization with equal totals. A total mismatch is reported
/// as a violation at `k = n`.
pub fn majorize<T: Scalar>(a: &[T], b: &[T], tol: T) -> Result<MajorizationVerdict<T>> {
    let mut v = weak_majorize(a, b, tol)?;
    if v.holds && !a.is_empty() {
        let (sa, sb): (T, T) = (a.iter().copied().sum(), b.iter().copied().sum());
        let mag = prefix_sums(&dec_rearrange(a)?)
            .into_iter()
            .chain(prefix_sums(&dec_rearrange(b)?))
            .fold(T::zero(), |m, x| m.max(x.abs()));
        if (sa - sb).abs() > tol * mag {
            v.holds = false;
            v.first_violation = Some(a.len());
        }
    }
    Ok(v)
}

/// Both sides of a checked inequality `lhs ≺_w rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison<T> {
    pub lhs: Vec<T>,
    pub rhs: Vec<T>,
    pub verdict: MajorizationVerdict<T>,
}

impl<T: Scalar> Comparison<T> {
    fn new(lhs: Vec<T>, rhs: Vec<T>, tol: f64) -> Result<Self> {
        let verdict = weak_majorize(&lhs, &rhs, T::lit(tol))?;
        Ok(Self { lhs, rhs, verdict })
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds
    }
}

/// The two second-order relations plus the chaining step
/// `s((A-B)∘(A-B)) ≺_w s((A-B)²)` that links them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrderComparison<T> {
    pub hadamard_form: Comparison<T>,
    pub square_form: Comparison<T>,
    pub chain: Comparison<T>,
}

impl<T: Scalar> SecondOrderComparison<T> {
    pub fn holds(&self) -> bool {
        self.hadamard_form.holds() && self.square_form.holds() && self.chain.holds()
    }
}

fn require_psd<T: Scalar>(m: &SymmetricMatrix<T>, tol: f64) -> Result<()> {
    let (ok, min_eig) = is_psd(m, T::lit(tol))?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotPsd { min_eig: min_eig.to_f64_lossy() })
    }
}

fn require_norm_inside<T: Scalar>(f: &ScalarFunction, m: &SymmetricMatrix<T>) -> Result<()> {
    let norm = m.op_norm()?.to_f64_lossy();
    let alpha = f.domain_alpha();
    if norm < alpha {
        Ok(())
    } else {
        Err(Error::NormAtBoundary { norm, alpha })
    }
}

fn same_size<T: Scalar>(a: &SymmetricMatrix<T>, b: &SymmetricMatrix<T>) -> Result<()> {
    if a.n() == b.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a.n(), right: b.n() })
    }
}

/// `λ(f[A] - f(0)J) ≺_w λ(f(A) - f(0)I)` for `A ⪰ 0` with `‖A‖ < α`.
pub fn verify_spectral_domination<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<Comparison<T>> {
    require_psd(a, cfg.psd_tol)?;
    require_norm_inside(f, a)?;
    let n = a.n();
    let f0: T = f.eval(T::zero())?;
    let entrywise = apply_entrywise(f, a)?.sub(&SymmetricMatrix::ones(n).scale(f0))?;
    let spectral = functional_calculus(f, a)?.sub(&SymmetricMatrix::identity(n).scale(f0))?;
    Comparison::new(entrywise.eigenvalues()?.into_vec(), spectral.eigenvalues()?.into_vec(), cfg.check_tol)
}

/// `f^{[1]}(λ_i(A), λ_i(B))`, pairing the i-th largest eigenvalues.
fn first_difference_vector<T: Scalar>(
    f: &ScalarFunction,
    la: &Spectrum<T>,
    lb: &Spectrum<T>,
) -> Result<Vec<T>> {
    la.as_slice().iter().zip(lb.as_slice()).map(|(&x, &y)| div_diff1(f, x, y)).collect()
}

fn second_difference_vector<T: Scalar>(
    f: &ScalarFunction,
    la: &Spectrum<T>,
    lb: &Spectrum<T>,
) -> Result<Vec<T>> {
    la.as_slice().iter().zip(lb.as_slice()).map(|(&x, &y)| div_diff2(f, x, y, y)).collect()
}

fn times<T: Scalar>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(&x, &y)| x * y).collect()
}

fn scaled<T: Scalar>(c: T, v: &[T]) -> Vec<T> {
    v.iter().map(|&x| c * x).collect()
}

fn pair_preconditions<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<()> {
    same_size(a, b)?;
    require_psd(a, cfg.psd_tol)?;
    require_psd(b, cfg.psd_tol)?;
    require_norm_inside(f, a)?;
    require_norm_inside(f, b)
}

fn entrywise_difference<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
) -> Result<SymmetricMatrix<T>> {
    apply_entrywise(f, a)?.sub(&apply_entrywise(f, b)?)
}

/// `s(f[A] - f[B]) ≺_w f^{[1]}(λ(A), λ(B)) ∘ s(A - B)`.
pub fn verify_divided_difference_bound<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<Comparison<T>> {
    pair_preconditions(f, a, b, cfg)?;
    let lhs = entrywise_difference(f, a, b)?.singular_values()?;
    let weights = first_difference_vector(f, &a.eigenvalues()?, &b.eigenvalues()?)?;
    let rhs = times(&weights, a.sub(b)?.singular_values()?.as_slice());
    Comparison::new(lhs.into_vec(), rhs, cfg.check_tol)
}

/// `f[A] - f[B] - (A - B)∘f'[B]`
fn first_order_remainder<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
) -> Result<SymmetricMatrix<T>> {
    let n = b.n();
    let mut fprime = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            fprime.push(f.deriv(b.get(i, j), 1)?);
        }
    }
    let fprime = SymmetricMatrix::from_data(n, fprime, b.symmetry_tol())?;
    entrywise_difference(f, a, b)?.sub(&a.sub(b)?.hadamard(&fprime)?)
}

fn second_order<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
    weight: impl Fn(&[T]) -> Vec<T>,
) -> Result<SecondOrderComparison<T>> {
    let lhs = first_order_remainder(f, a, b)?.singular_values()?.into_vec();
    let d = a.sub(b)?;
    let s_hadamard = d.hadamard(&d)?.singular_values()?.into_vec();
    let s_square = d.square().singular_values()?.into_vec();
    Ok(SecondOrderComparison {
        hadamard_form: Comparison::new(lhs.clone(), weight(&s_hadamard), cfg.check_tol)?,
        square_form: Comparison::new(lhs, weight(&s_square), cfg.check_tol)?,
        chain: Comparison::new(s_hadamard, s_square, cfg.check_tol)?,
    })
}

/// `s(f[A] - f[B] - (A-B)∘f'[B]) ≺_w f^{[2]}(λ(A), λ(B), λ(B)) ∘ s(X)` for
/// `X = (A-B)∘(A-B)` and `X = (A-B)²`.
pub fn verify_second_order_bound<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<SecondOrderComparison<T>> {
    pair_preconditions(f, a, b, cfg)?;
    let weights = second_difference_vector(f, &a.eigenvalues()?, &b.eigenvalues()?)?;
    second_order(f, a, b, cfg, |s| times(&weights, s))
}

/// `max_i f^{[1]}(a_ii, b_ii)`
pub fn diagonal_first_constant<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
) -> Result<T> {
    same_size(a, b)?;
    let mut c = T::neg_infinity();
    for (x, y) in a.diag().into_iter().zip(b.diag()) {
        c = c.max(div_diff1(f, x, y)?);
    }
    Ok(c)
}

/// `max_i f^{[2]}(a_ii, b_ii, b_ii)`
pub fn diagonal_second_constant<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
) -> Result<T> {
    same_size(a, b)?;
    let mut c = T::neg_infinity();
    for (x, y) in a.diag().into_iter().zip(b.diag()) {
        c = c.max(div_diff2(f, x, y, y)?);
    }
    Ok(c)
}

fn diagonal_preconditions<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<()> {
    same_size(a, b)?;
    require_psd(a, cfg.psd_tol)?;
    require_psd(b, cfg.psd_tol)?;
    apply_entrywise(f, a)?;
    apply_entrywise(f, b)?;
    Ok(())
}

/// `s(f[A] - f[B]) ≺_w (max_i f^{[1]}(a_ii, b_ii)) s(A - B)`.
pub fn verify_diagonal_bound<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<Comparison<T>> {
    diagonal_preconditions(f, a, b, cfg)?;
    let c = diagonal_first_constant(f, a, b)?;
    let lhs = entrywise_difference(f, a, b)?.singular_values()?.into_vec();
    let rhs = scaled(c, a.sub(b)?.singular_values()?.as_slice());
    Comparison::new(lhs, rhs, cfg.check_tol)
}

/// Second-order relations with the scalar `max_i f^{[2]}(a_ii, b_ii, b_ii)`.
pub fn verify_diagonal_second_order_bound<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    cfg: &InequalityConfig,
) -> Result<SecondOrderComparison<T>> {
    diagonal_preconditions(f, a, b, cfg)?;
    let c = diagonal_second_constant(f, a, b)?;
    second_order(f, a, b, cfg, |s| scaled(c, s))
}

/// One row of [`norm_inequality_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow<T> {
    pub norm: NormKind,
    /// `|||f[A] - f[B]|||`
    pub lhs: T,
    /// `(max_i f^{[1]}(a_ii, b_ii)) |||A - B|||`
    pub rhs: T,
    pub slack: T,
}

/// Evaluates `|||f[A] - f[B]||| ≤ (max_i f^{[1]}(a_ii, b_ii)) |||A - B|||` in each
/// requested norm.
pub fn norm_inequality_report<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    norms: &[NormKind],
    cfg: &InequalityConfig,
) -> Result<Vec<NormRow<T>>> {
    diagonal_preconditions(f, a, b, cfg)?;
    let c = diagonal_first_constant(f, a, b)?;
    let left = entrywise_difference(f, a, b)?;
    let right = a.sub(b)?;
    norms
        .iter()
        .map(|&norm| {
            let lhs = ui_norm(&left, norm)?;
            let rhs = c * ui_norm(&right, norm)?;
            Ok(NormRow { norm, lhs, rhs, slack: rhs - lhs })
        })
        .collect()
}
