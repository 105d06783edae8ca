//! Whether the class hypothesis of a bound is known to hold for a function.

use serde::{Deserialize, Serialize};

use schur_order_core::scalarfn::{known_membership, Membership};
use schur_order_core::{FunctionClass, ScalarFunction};

use crate::invocation::TheoremId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    /// Taylor coefficients certify the class.
    Certified,
    /// Fractional power at or above its class threshold.
    Threshold,
    /// Asserted by the caller.
    Assumed,
    /// Known not to hold.
    KnownFalse,
    Unknown,
}

impl HypothesisStatus {
    /// A failure under this status is a bug or a false assertion.
    pub fn asserted(self) -> bool {
        matches!(self, Self::Certified | Self::Threshold | Self::Assumed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub status: HypothesisStatus,
    pub requirement: String,
    pub notes: Vec<String>,
}

enum Side {
    Ok,
    Fails(String),
    Unknown(String),
}

fn sign_at_zero(f: &ScalarFunction, k: u32) -> Side {
    match f.deriv::<f64>(0.0, k) {
        Ok(d) if d >= 0.0 => Side::Ok,
        Ok(d) => Side::Fails(format!("f^({k})(0) = {d} < 0")),
        Err(e) => Side::Unknown(format!("f^({k})(0) unavailable: {e}")),
    }
}

fn from_membership(m: Membership) -> HypothesisStatus {
    match m {
        Membership::Certified => HypothesisStatus::Certified,
        Membership::Threshold => HypothesisStatus::Threshold,
        Membership::KnownOutside => HypothesisStatus::KnownFalse,
        Membership::Unknown => HypothesisStatus::Unknown,
    }
}

/// Hypotheses of each bound at order `n`:
///
/// - `thm61`: `f` S-monotone.
/// - `thm63`: `f` S-convex, `f'(0) ≥ 0`.
/// - `prop65`: `f'` S-convex, `f''(0) ≥ 0`.
/// - `prop66`: `f` S-monotone; at `n = 2` also differentiable.
/// - `prop67`: `f` S-convex, `n ≥ 3`.
pub fn hypothesis_for(theorem: TheoremId, f: &ScalarFunction, n: usize, assume: bool) -> Hypothesis {
    let mut notes = Vec::new();
    let (requirement, target, class, side) = match theorem {
        TheoremId::Thm61 => (format!("f S-monotone of order {n}"), Ok(f.clone()), FunctionClass::Monotone, Side::Ok),
        TheoremId::Thm63 => (
            format!("f S-convex of order {n} and f'(0) >= 0"),
            Ok(f.clone()),
            FunctionClass::Convex,
            sign_at_zero(f, 1),
        ),
        TheoremId::Prop65 => (
            format!("f' S-convex of order {n} and f''(0) >= 0"),
            f.derivative_fn(),
            FunctionClass::Convex,
            sign_at_zero(f, 2),
        ),
        TheoremId::Prop66 => {
            let side = match n {
                2 => match f.deriv::<f64>(0.0, 1) {
                    Ok(_) => Side::Ok,
                    Err(e) => Side::Unknown(format!("order 2 needs f differentiable: {e}")),
                },
                _ => Side::Ok,
            };
            (format!("f S-monotone of order {n}"), Ok(f.clone()), FunctionClass::Monotone, side)
        }
        TheoremId::Prop67 => {
            let side = if n >= 3 { Side::Ok } else { Side::Unknown(format!("stated for n >= 3, got n = {n}")) };
            (format!("f S-convex of order {n}, n >= 3"), Ok(f.clone()), FunctionClass::Convex, side)
        }
    };
    let membership = match target {
        Ok(g) => from_membership(known_membership(&g, class, n)),
        Err(e) => {
            notes.push(format!("no derivative: {e}"));
            HypothesisStatus::KnownFalse
        }
    };
    let mut status = match side {
        Side::Fails(why) => {
            notes.push(why);
            HypothesisStatus::KnownFalse
        }
        Side::Unknown(why) => {
            notes.push(why);
            if membership == HypothesisStatus::KnownFalse {
                membership
            } else {
                HypothesisStatus::Unknown
            }
        }
        Side::Ok => membership,
    };
    if status == HypothesisStatus::Unknown && assume {
        status = HypothesisStatus::Assumed;
    }
    Hypothesis { status, requirement, notes }
}
