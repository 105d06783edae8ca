use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::eig::sym_eig;
use super::matrix::{Spectrum, SymmetricMatrix};

/// A unitarily invariant norm, computed from singular values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    Operator,
    /// Sum of the `k` largest singular values.
    KyFan { k: usize },
    /// `(Σ sᵢᵖ)^{1/p}`, `p ≥ 1`.
    Schatten { p: f64 },
    Trace,
    Frobenius,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "op"),
            NormKind::KyFan { k } => write!(f, "kyfan:{k}"),
            NormKind::Schatten { p } => write!(f, "schatten:{p}"),
            NormKind::Trace => write!(f, "trace"),
            NormKind::Frobenius => write!(f, "fro"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    /// Accepts `op`, `trace`, `fro`, `kyfan:<k>` and `schatten:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown norm kind {s:?}"));
        match s {
            "op" | "operator" => return Ok(NormKind::Operator),
            "trace" => return Ok(NormKind::Trace),
            "fro" | "frobenius" => return Ok(NormKind::Frobenius),
            _ => {}
        }
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "kyfan" => Ok(NormKind::KyFan { k: arg.parse().map_err(|_| bad())? }),
            "schatten" => Ok(NormKind::Schatten { p: arg.parse().map_err(|_| bad())? }),
            _ => Err(bad()),
        }
    }
}

/// Evaluates a norm from a vector of singular values.
pub fn ui_norm_of_values<T: Scalar>(s: &Spectrum<T>, kind: NormKind) -> Result<T> {
    let v = s.as_slice();
    match kind {
        NormKind::Operator => Ok(s.max()),
        NormKind::Trace => Ok(s.sum()),
        NormKind::Frobenius => Ok(v.iter().map(|&x| x * x).sum::<T>().sqrt()),
        NormKind::KyFan { k } => {
            if k == 0 || k > v.len() {
                return Err(Error::InvalidArgument(format!(
                    "Ky Fan index {k} outside 1..={}",
                    v.len()
                )));
            }
            Ok(v[..k].iter().copied().sum())
        }
        NormKind::Schatten { p } => {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::InvalidArgument(format!("Schatten exponent {p} must be a finite p >= 1")));
            }
            let pt = T::lit(p);
            Ok(v.iter().map(|&x| x.powf(pt)).sum::<T>().powf(T::one() / pt))
        }
    }
}

/// Unitarily invariant norm of a symmetric matrix; its singular values are the
/// absolute eigenvalues.
pub fn ui_norm<T: Scalar>(m: &SymmetricMatrix<T>, kind: NormKind) -> Result<T> {
    ui_norm_of_values(&m.singular_values()?, kind)
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Singular values of a symmetric matrix: `|λ|` sorted non-increasing.
    pub fn singular_values(&self) -> Result<Spectrum<T>> {
        let eig = sym_eig(self)?;
        Spectrum::from_unsorted(eig.values.as_slice().iter().map(|x| x.abs()).collect())
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Result<Spectrum<T>> {
        Ok(sym_eig(self)?.values)
    }

    pub fn op_norm(&self) -> Result<T> {
        Ok(self.singular_values()?.max())
    }
}
