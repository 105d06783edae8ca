use crate::error::{Error, Result};

use super::classes::{ClassVerdict, FunctionClass, VerdictWitness};
use super::{binomial, factorial, is_integer, ScalarFunction};

pub const DEFAULT_SCAN_DEPTH: usize = 64;
pub const COEFF_TOL: f64 = 1.0e-12;

impl ScalarFunction {
    /// Taylor coefficient `f^{(k)}(0) / k!`.
    pub fn taylor_coeff(&self, k: u32) -> Result<f64> {
        if !(self.radius_at(0.0) > 0.0) {
            return Err(Error::NotAnalytic(format!("{self}")));
        }
        Ok(match self {
            Self::PowerSeries { coeffs, .. } => coeffs.get(k as usize).copied().unwrap_or(0.0),
            Self::AbsPower { p } | Self::SignedPower { p } => {
                debug_assert!(is_integer(*p));
                if k as f64 == *p {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Exp => 1.0 / factorial(k),
            Self::NegLog1m => {
                if k == 0 {
                    0.0
                } else {
                    1.0 / k as f64
                }
            }
            // -(1-x)^p = Σ (-1)^{k+1} C(p,k) x^k
            Self::NegPower { p } => {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                sign * binomial(*p, k)
            }
            Self::Shifted { inner, shift } => inner.deriv::<f64>(*shift, k)? / factorial(k),
            Self::Sum(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.taylor_coeff(k)?;
                }
                acc
            }
            Self::Scaled { factor, inner } => factor * inner.taylor_coeff(k)?,
            Self::Reflected(inner) => {
                let c = inner.taylor_coeff(k)?;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            }
            // (k+m)!/k! * c_{k+m}
            Self::Derivative { inner, order } => {
                let m = *order;
                let ratio: f64 = ((k + 1)..=(k + m)).map(|j| j as f64).product();
                ratio * inner.taylor_coeff(k + m)?
            }
        })
    }

    /// Whether the Taylor series at 0 represents the function on all of `(-α, α)`.
    pub fn series_covers_domain(&self) -> bool {
        let r = self.radius_at(0.0);
        r > 0.0 && r >= self.domain_alpha()
    }
}

/// Certifies class membership from Taylor coefficients: every scanned
/// coefficient from the class's starting index on is nonnegative (up to
/// `COEFF_TOL`). A negative coefficient is reported as the witness.
pub fn certify_class_by_coeffs(f: &ScalarFunction, class: FunctionClass, depth: usize) -> Result<ClassVerdict> {
    if !f.series_covers_domain() {
        return Err(Error::NotAnalytic(format!(
            "{f}: Taylor series at 0 does not cover the domain (-{a}, {a})",
            a = f.domain_alpha()
        )));
    }
    let start = class.first_coefficient();
    let mut margin = f64::INFINITY;
    for k in start..depth as u32 {
        let c = f.taylor_coeff(k)?;
        margin = margin.min(c);
        if c < -COEFF_TOL {
            return Ok(ClassVerdict {
                holds: false,
                margin: c,
                checked: (k - start + 1) as usize,
                witness: Some(VerdictWitness::Coefficient { k, value: c }),
            });
        }
    }
    Ok(ClassVerdict {
        holds: true,
        margin: if margin.is_finite() { margin } else { 0.0 },
        checked: depth.saturating_sub(start as usize),
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert!((ScalarFunction::NegLog1m.taylor_coeff(3).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!((ScalarFunction::Exp.taylor_coeff(4).unwrap() - 1.0 / 24.0).abs() < 1e-17);
        let np = ScalarFunction::neg_power(0.5).unwrap();
        assert!((np.taylor_coeff(2).unwrap() - 0.125).abs() < 1e-16);
        assert_eq!(np.taylor_coeff(0).unwrap(), -1.0);
    }

    #[test]
    fn non_analytic_variants_rejected() {
        let phi = ScalarFunction::abs_power(1.5).unwrap();
        assert!(matches!(phi.taylor_coeff(1), Err(Error::NotAnalytic(_))));
        assert!(certify_class_by_coeffs(&phi, FunctionClass::Positive, 8).is_err());
        let abs = ScalarFunction::abs_power(1.0).unwrap();
        assert!(abs.taylor_coeff(0).is_err());
        // x ↦ |x + 1|^{1/2} is analytic at 0 but its series stops at radius 1
        let shifted = ScalarFunction::shifted(phi, 1.0).unwrap();
        assert!(shifted.taylor_coeff(2).is_ok());
        assert!(certify_class_by_coeffs(&shifted, FunctionClass::Positive, 8).is_err());
    }

    #[test]
    fn integer_powers_are_polynomials() {
        let phi2 = ScalarFunction::abs_power(2.0).unwrap();
        assert_eq!(phi2.taylor_coeff(2).unwrap(), 1.0);
        assert_eq!(phi2.taylor_coeff(1).unwrap(), 0.0);
        let psi3 = ScalarFunction::signed_power(3.0).unwrap();
        assert_eq!(psi3.taylor_coeff(3).unwrap(), 1.0);
        assert!(ScalarFunction::signed_power(2.0).unwrap().taylor_coeff(2).is_err());
    }

    #[test]
    fn certification_examples() {
        let v = certify_class_by_coeffs(&ScalarFunction::Exp, FunctionClass::Positive, 64).unwrap();
        assert!(v.holds && v.witness.is_none());

        let np = ScalarFunction::neg_power(0.5).unwrap();
        assert!(certify_class_by_coeffs(&np, FunctionClass::Monotone, 64).unwrap().holds);
        let v = certify_class_by_coeffs(&np, FunctionClass::Positive, 64).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(VerdictWitness::Coefficient { k: 0, value: -1.0 }));

        let mut coeffs = vec![0.0, -1.0];
        coeffs.extend(std::iter::repeat(1.0).take(10));
        let f = ScalarFunction::polynomial(coeffs).unwrap();
        assert!(certify_class_by_coeffs(&f, FunctionClass::Convex, 64).unwrap().holds);
        let v = certify_class_by_coeffs(&f, FunctionClass::Monotone, 64).unwrap();
        assert_eq!(v.witness, Some(VerdictWitness::Coefficient { k: 1, value: -1.0 }));
    }

    #[test]
    fn composite_coefficients() {
        let f = ScalarFunction::sum(vec![ScalarFunction::Exp, ScalarFunction::NegLog1m]).unwrap();
        for k in 0..10 {
            let want = ScalarFunction::Exp.taylor_coeff(k).unwrap() + ScalarFunction::NegLog1m.taylor_coeff(k).unwrap();
            assert!((f.taylor_coeff(k).unwrap() - want).abs() < 1e-15);
        }
        let g = ScalarFunction::scaled(-2.0, ScalarFunction::Exp).unwrap();
        assert!((g.taylor_coeff(3).unwrap() + 2.0 / 6.0).abs() < 1e-15);
        let r = ScalarFunction::reflected(ScalarFunction::Exp);
        assert!((r.taylor_coeff(3).unwrap() + 1.0 / 6.0).abs() < 1e-15);
        // d/dx of -log(1-x) is Σ x^k
        let d = ScalarFunction::NegLog1m.derivative_fn().unwrap();
        for k in 0..6 {
            assert!((d.taylor_coeff(k).unwrap() - 1.0).abs() < 1e-14);
        }
        // e^{x+1} has coefficients e / k!
        let s = ScalarFunction::shifted(ScalarFunction::Exp, 1.0).unwrap();
        assert!((s.taylor_coeff(2).unwrap() - std::f64::consts::E / 2.0).abs() < 1e-15);
    }
}
