//! What is known, without sampling, about membership of a function in an
//! order-`n` class: a coefficient certificate, the fractional-power thresholds,
//! or their sharpness.

use serde::{Deserialize, Serialize};

use super::classes::FunctionClass;
use super::taylor::{certify_class_by_coeffs, DEFAULT_SCAN_DEPTH};
use super::{is_integer, ScalarFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// All Taylor coefficients from the class's starting index are nonnegative.
    Certified,
    /// `φ_p`/`ψ_p` (or a nonnegative combination) above the class threshold:
    /// `p ≥ n-2` positive, `p ≥ n-1` monotone, `p ≥ n` convex.
    Threshold,
    /// `φ_p`/`ψ_p` with non-integer `p` below the threshold.
    KnownOutside,
    Unknown,
}

impl Membership {
    /// Whether the function is known to be in the class.
    pub fn is_member(self) -> bool {
        matches!(self, Membership::Certified | Membership::Threshold)
    }
}

fn threshold(class: FunctionClass, n: usize) -> f64 {
    let n = n as f64;
    match class {
        FunctionClass::Positive => n - 2.0,
        FunctionClass::Monotone => n - 1.0,
        FunctionClass::Convex => n,
    }
}

fn structural(f: &ScalarFunction, class: FunctionClass, n: usize) -> Membership {
    match f {
        ScalarFunction::AbsPower { p } | ScalarFunction::SignedPower { p } => {
            if *p >= threshold(class, n) && *p > 0.0 {
                Membership::Threshold
            } else if !is_integer(*p) {
                Membership::KnownOutside
            } else {
                Membership::Unknown
            }
        }
        ScalarFunction::Scaled { factor, inner } if *factor > 0.0 => structural(inner, class, n),
        ScalarFunction::Scaled { factor, .. } if *factor == 0.0 => Membership::Threshold,
        ScalarFunction::Sum(terms) => {
            let all = terms.iter().all(|t| {
                let m = structural(t, class, n);
                m.is_member() || certify_class_by_coeffs(t, class, DEFAULT_SCAN_DEPTH).map(|v| v.holds).unwrap_or(false)
            });
            if all {
                Membership::Threshold
            } else {
                Membership::Unknown
            }
        }
        _ => Membership::Unknown,
    }
}

/// Best static knowledge about `f ∈ class` at order `n`.
pub fn known_membership(f: &ScalarFunction, class: FunctionClass, n: usize) -> Membership {
    if let Ok(v) = certify_class_by_coeffs(f, class, DEFAULT_SCAN_DEPTH) {
        if v.holds {
            return Membership::Certified;
        }
    }
    structural(f, class, n)
}
