//! The scalar function universe: power series, fractional powers
//! `φ_p(x) = |x|^p` and `ψ_p(x) = sign(x)|x|^p`, a few named analytic examples,
//! and closure under shifts, sums, scalings and reflection.
//!
//! Functions are plain data. Parameters are stored as `f64`; evaluation and
//! differentiation are generic over [`Scalar`].

mod classes;
mod divdiff;
mod membership;
mod dsl;
mod taylor;

pub use self::classes::{
    check_midpoint_convex, check_phi_class, check_spos2, log_convexity_gap, log_grid, ClassVerdict,
    FunctionClass, VerdictWitness, DEFAULT_GRID_POINTS, WORKING_BOX,
};
pub use self::divdiff::{div_diff1, div_diff2, DD2_SWITCH, DD_SWITCH};
pub use self::dsl::parse_fn_spec;
pub use self::membership::{known_membership, Membership};
pub use self::taylor::{certify_class_by_coeffs, COEFF_TOL, DEFAULT_SCAN_DEPTH};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    /// `Σ coeffs[k] x^k`, declared convergent for `|x| < radius`.
    PowerSeries { coeffs: Vec<f64>, radius: f64 },
    /// `φ_p(x) = |x|^p`, with `φ_0 ≡ 1`.
    AbsPower { p: f64 },
    /// `ψ_p(x) = sign(x)|x|^p`, with `ψ_0 = sign` and `ψ_0(0) = 0`.
    SignedPower { p: f64 },
    Exp,
    /// `-log(1 - x)` on `(-1, 1)`.
    NegLog1m,
    /// `-(1 - x)^p` on `(-1, 1)`, `0 < p < 1`.
    NegPower { p: f64 },
    /// `x ↦ inner(x + shift)`.
    Shifted { inner: Box<ScalarFunction>, shift: f64 },
    Sum(Vec<ScalarFunction>),
    Scaled { factor: f64, inner: Box<ScalarFunction> },
    /// `x ↦ inner(-x)`.
    Reflected(Box<ScalarFunction>),
    /// `x ↦ inner^{(order)}(x)`.
    Derivative { inner: Box<ScalarFunction>, order: u32 },
}

fn is_integer(p: f64) -> bool {
    p.fract() == 0.0
}

fn is_even_integer(p: f64) -> bool {
    is_integer(p) && (p / 2.0).fract() == 0.0
}

/// `p (p-1) ⋯ (p-k+1)`
pub(crate) fn falling(p: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (p - j as f64))
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Generalized binomial coefficient `C(p, k)`.
pub fn binomial(p: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (p - j as f64) / (j + 1) as f64)
}

impl ScalarFunction {
    pub fn power_series(coeffs: Vec<f64>, radius: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("power series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("power series coefficients".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
        }
        Ok(Self::PowerSeries { coeffs, radius })
    }

    /// The polynomial with the given coefficients, valid on the whole line.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::power_series(coeffs, f64::INFINITY)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self::PowerSeries { coeffs, radius: f64::INFINITY }
    }

    pub fn identity() -> Self {
        Self::monomial(1)
    }

    pub fn constant(c: f64) -> Self {
        Self::PowerSeries { coeffs: vec![c], radius: f64::INFINITY }
    }

    pub fn abs_power(p: f64) -> Result<Self> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!("exponent {p} must be a finite p >= 0")));
        }
        Ok(Self::AbsPower { p })
    }

    pub fn signed_power(p: f64) -> Result<Self> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!("exponent {p} must be a finite p >= 0")));
        }
        Ok(Self::SignedPower { p })
    }

    pub fn neg_power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("-(1-x)^p needs 0 < p < 1, got {p}")));
        }
        Ok(Self::NegPower { p })
    }

    pub fn shifted(inner: Self, shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::NonFinite("shift".into()));
        }
        let f = Self::Shifted { inner: Box::new(inner), shift };
        if !(f.domain_alpha() > 0.0) {
            return Err(Error::InvalidArgument(format!("shift {shift} leaves an empty symmetric domain")));
        }
        Ok(f)
    }

    pub fn sum(terms: Vec<Self>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("sum needs at least one term".into()));
        }
        Ok(Self::Sum(terms))
    }

    pub fn scaled(factor: f64, inner: Self) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::NonFinite("scale factor".into()));
        }
        Ok(Self::Scaled { factor, inner: Box::new(inner) })
    }

    pub fn reflected(inner: Self) -> Self {
        Self::Reflected(Box::new(inner))
    }

    /// `self + c`
    pub fn plus_constant(self, c: f64) -> Self {
        Self::Sum(vec![self, Self::constant(c)])
    }

    /// Half-width `α` of the open interval `(-α, α)` the function lives on.
    pub fn domain_alpha(&self) -> f64 {
        match self {
            Self::PowerSeries { radius, .. } => *radius,
            Self::AbsPower { .. } | Self::SignedPower { .. } | Self::Exp => f64::INFINITY,
            Self::NegLog1m | Self::NegPower { .. } => 1.0,
            Self::Shifted { inner, shift } => (inner.domain_alpha() - shift.abs()).max(0.0),
            Self::Sum(terms) => terms.iter().map(Self::domain_alpha).fold(f64::INFINITY, f64::min),
            Self::Scaled { inner, .. } | Self::Reflected(inner) | Self::Derivative { inner, .. } => {
                inner.domain_alpha()
            }
        }
    }

    pub fn in_domain(&self, x: f64) -> bool {
        x.is_finite() && x.abs() < self.domain_alpha()
    }

    fn check_domain<T: Scalar>(&self, x: T) -> Result<()> {
        let xf = x.to_f64_lossy();
        if !self.in_domain(xf) {
            if let Self::PowerSeries { radius, .. } = self {
                return Err(Error::Divergent { x: xf, radius: *radius });
            }
            return Err(Error::OutOfDomain { x: xf, alpha: self.domain_alpha() });
        }
        Ok(())
    }

    pub fn eval<T: Scalar>(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        self.deriv_unchecked(x, 0)
    }

    /// `k`-th derivative at `x` (`k = 0` is the value), from closed forms.
    pub fn deriv<T: Scalar>(&self, x: T, k: u32) -> Result<T> {
        self.check_domain(x)?;
        self.deriv_unchecked(x, k)
    }

    fn deriv_unchecked<T: Scalar>(&self, x: T, k: u32) -> Result<T> {
        let lit = T::lit;
        match self {
            Self::PowerSeries { coeffs, .. } => {
                // Horner on the k-times differentiated coefficients
                let mut acc = T::zero();
                for j in (k as usize..coeffs.len()).rev() {
                    acc = acc * x + lit(coeffs[j] * falling(j as f64, k));
                }
                Ok(acc)
            }
            Self::AbsPower { p } => power_deriv(*p, false, x, k),
            Self::SignedPower { p } => power_deriv(*p, true, x, k),
            Self::Exp => Ok(x.exp()),
            Self::NegLog1m => {
                if k == 0 {
                    Ok(-(-x).ln_1p())
                } else {
                    Ok(lit(factorial(k - 1)) / (T::one() - x).powi(k as i32))
                }
            }
            Self::NegPower { p } => {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                Ok(lit(sign * falling(*p, k)) * (T::one() - x).powf(lit(*p - k as f64)))
            }
            Self::Shifted { inner, shift } => inner.deriv_unchecked(x + lit(*shift), k),
            Self::Sum(terms) => {
                let mut acc = T::zero();
                for t in terms {
                    acc = acc + t.deriv_unchecked(x, k)?;
                }
                Ok(acc)
            }
            Self::Scaled { factor, inner } => Ok(lit(*factor) * inner.deriv_unchecked(x, k)?),
            Self::Reflected(inner) => {
                let v = inner.deriv_unchecked(-x, k)?;
                Ok(if k % 2 == 0 { v } else { -v })
            }
            Self::Derivative { inner, order } => inner.deriv_unchecked(x, order + k),
        }
    }

    /// Largest `k` such that the function is `k` times differentiable on its
    /// whole domain (`u32::MAX` for smooth functions).
    pub fn differentiable_order(&self) -> u32 {
        match self {
            Self::PowerSeries { .. } | Self::Exp | Self::NegLog1m | Self::NegPower { .. } => u32::MAX,
            Self::AbsPower { p } => {
                if is_even_integer(*p) {
                    u32::MAX
                } else if is_integer(*p) {
                    *p as u32 - 1
                } else {
                    p.floor() as u32
                }
            }
            Self::SignedPower { p } => {
                if *p == 0.0 {
                    0
                } else if is_integer(*p) && !is_even_integer(*p) {
                    u32::MAX
                } else if is_integer(*p) {
                    *p as u32 - 1
                } else {
                    p.floor() as u32
                }
            }
            Self::Shifted { inner, .. } | Self::Scaled { inner, .. } | Self::Reflected(inner) => {
                inner.differentiable_order()
            }
            Self::Sum(terms) => terms.iter().map(Self::differentiable_order).min().unwrap_or(u32::MAX),
            Self::Derivative { inner, order } => inner.differentiable_order().saturating_sub(*order),
        }
    }

    /// The derivative as a function, in closed form where one exists.
    pub fn derivative_fn(&self) -> Result<Self> {
        if self.differentiable_order() < 1 {
            return Err(Error::NotDifferentiable {
                x: 0.0,
                order: 1,
                reason: format!("{self} is not differentiable on its whole domain"),
            });
        }
        Ok(match self {
            Self::PowerSeries { coeffs, radius } => {
                let mut d: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(j, c)| j as f64 * c).collect();
                if d.is_empty() {
                    d.push(0.0);
                }
                Self::PowerSeries { coeffs: d, radius: *radius }
            }
            Self::AbsPower { p } if *p == 0.0 => Self::constant(0.0),
            Self::AbsPower { p } => Self::Scaled { factor: *p, inner: Box::new(Self::SignedPower { p: p - 1.0 }) },
            Self::SignedPower { p } => Self::Scaled { factor: *p, inner: Box::new(Self::AbsPower { p: p - 1.0 }) },
            Self::Exp => Self::Exp,
            Self::NegLog1m | Self::NegPower { .. } => Self::Derivative { inner: Box::new(self.clone()), order: 1 },
            Self::Shifted { inner, shift } => Self::Shifted { inner: Box::new(inner.derivative_fn()?), shift: *shift },
            Self::Sum(terms) => Self::Sum(terms.iter().map(Self::derivative_fn).collect::<Result<_>>()?),
            Self::Scaled { factor, inner } => Self::Scaled { factor: *factor, inner: Box::new(inner.derivative_fn()?) },
            Self::Reflected(inner) => Self::Scaled {
                factor: -1.0,
                inner: Box::new(Self::Reflected(Box::new(inner.derivative_fn()?))),
            },
            Self::Derivative { inner, order } => Self::Derivative { inner: inner.clone(), order: order + 1 },
        })
    }

    /// Radius of convergence of the Taylor series centered at `c` (a lower
    /// bound for composite functions); zero where the function is not analytic.
    pub fn radius_at(&self, c: f64) -> f64 {
        match self {
            Self::PowerSeries { radius, .. } => (radius - c.abs()).max(0.0),
            Self::Exp => f64::INFINITY,
            Self::NegLog1m | Self::NegPower { .. } => (1.0 - c).abs(),
            Self::AbsPower { p } if is_even_integer(*p) => f64::INFINITY,
            Self::SignedPower { p } if is_integer(*p) && !is_even_integer(*p) => f64::INFINITY,
            Self::AbsPower { .. } | Self::SignedPower { .. } => c.abs(),
            Self::Shifted { inner, shift } => inner.radius_at(c + shift),
            Self::Sum(terms) => terms.iter().map(|t| t.radius_at(c)).fold(f64::INFINITY, f64::min),
            Self::Scaled { inner, .. } | Self::Derivative { inner, .. } => inner.radius_at(c),
            Self::Reflected(inner) => inner.radius_at(-c),
        }
    }

    /// Even and odd parts `f₀(x) = (f(x)+f(-x))/2`, `f₁(x) = (f(x)-f(-x))/2`.
    pub fn even_odd_split(&self) -> (Self, Self) {
        match self {
            Self::PowerSeries { coeffs, radius } => {
                let even = coeffs.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c } else { 0.0 }).collect();
                let odd = coeffs.iter().enumerate().map(|(k, &c)| if k % 2 == 1 { c } else { 0.0 }).collect();
                (
                    Self::PowerSeries { coeffs: even, radius: *radius },
                    Self::PowerSeries { coeffs: odd, radius: *radius },
                )
            }
            Self::AbsPower { .. } => (self.clone(), Self::constant(0.0)),
            Self::SignedPower { .. } => (Self::constant(0.0), self.clone()),
            Self::Scaled { factor, inner } => {
                let (e, o) = inner.even_odd_split();
                (
                    Self::Scaled { factor: *factor, inner: Box::new(e) },
                    Self::Scaled { factor: *factor, inner: Box::new(o) },
                )
            }
            Self::Sum(terms) => {
                let (e, o): (Vec<_>, Vec<_>) = terms.iter().map(Self::even_odd_split).unzip();
                (Self::Sum(e), Self::Sum(o))
            }
            _ => {
                let mirror = Self::reflected(self.clone());
                let even = Self::Scaled { factor: 0.5, inner: Box::new(Self::Sum(vec![self.clone(), mirror.clone()])) };
                let odd = Self::Scaled {
                    factor: 0.5,
                    inner: Box::new(Self::Sum(vec![
                        self.clone(),
                        Self::Scaled { factor: -1.0, inner: Box::new(mirror) },
                    ])),
                };
                (even, odd)
            }
        }
    }
}

/// Derivatives of `φ_p` (`odd = false`) and `ψ_p` (`odd = true`).
fn power_deriv<T: Scalar>(p: f64, odd: bool, x: T, k: u32) -> Result<T> {
    if k == 0 {
        return Ok(if p == 0.0 {
            if odd {
                x.signum() * if x == T::zero() { T::zero() } else { T::one() }
            } else {
                T::one()
            }
        } else {
            let m = x.abs().powf(T::lit(p));
            if odd && x < T::zero() {
                -m
            } else {
                m
            }
        });
    }
    if x != T::zero() {
        // φ_p^{(k)} = (p)_k |x|^{p-k} sign(x)^k, ψ_p^{(k)} = (p)_k |x|^{p-k} sign(x)^{k+1}
        let c = falling(p, k);
        if c == 0.0 {
            return Ok(T::zero());
        }
        let mag = T::lit(c) * x.abs().powf(T::lit(p - k as f64));
        let flips = if odd { k + 1 } else { k };
        return Ok(if x < T::zero() && flips % 2 == 1 { -mag } else { mag });
    }
    let polynomial = if odd { is_integer(p) && !is_even_integer(p) } else { is_even_integer(p) };
    if polynomial {
        return Ok(if k as f64 == p { T::lit(factorial(k)) } else { T::zero() });
    }
    if (k as f64) < p {
        return Ok(T::zero());
    }
    Err(Error::NotDifferentiable {
        x: 0.0,
        order: k,
        reason: format!("{}_{p} has no derivative of order {k} at 0", if odd { "psi" } else { "phi" }),
    })
}
