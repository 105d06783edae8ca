//! Dense symmetric linear algebra: eigendecomposition, positive-semidefinite
//! and Loewner-order tests, singular values and unitarily invariant norms.
//!
//! Everything here is sized for small matrices (n up to a dozen or so) and is
//! written against [`Scalar`](crate::Scalar), so `f32` and `f64` both work.

mod csv;
mod eig;
mod matrix;
mod norms;
mod svd;

pub use self::csv::{read_matrix_csv, write_matrix_csv, CsvMatrix};
pub use self::eig::{sym_eig, SymmetricEigen};
pub use self::matrix::{Spectrum, SquareMatrix, SymmetricMatrix};
pub use self::norms::{ui_norm, ui_norm_of_values, NormKind};
pub use self::svd::singular_values;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative tolerance for positive-semidefiniteness.
pub const DEFAULT_PSD_TOL: f64 = 1.0e-9;

/// Tests `M ⪰ 0`.
///
/// Returns whether the smallest eigenvalue clears `-tol * max(1, ‖M‖_op)`,
/// together with that smallest eigenvalue.
pub fn is_psd<T: Scalar>(m: &SymmetricMatrix<T>, tol: T) -> Result<(bool, T)> {
    if !(tol >= T::zero()) {
        return Err(Error::InvalidArgument(format!("negative PSD tolerance {tol}")));
    }
    let eig = sym_eig(m)?;
    let min = eig.values.min();
    let op = eig.values.max().abs().max(min.abs());
    Ok((min >= -tol * op.max(T::one()), min))
}

/// Tests `A ⪰ B`, i.e. `is_psd(A - B)`.
pub fn loewner_geq<T: Scalar>(a: &SymmetricMatrix<T>, b: &SymmetricMatrix<T>, tol: T) -> Result<bool> {
    let diff = a.sub(b)?;
    Ok(is_psd(&diff, tol)?.0)
}

/// Smallest eigenvalue of `A - B`.
pub fn loewner_gap<T: Scalar>(a: &SymmetricMatrix<T>, b: &SymmetricMatrix<T>) -> Result<T> {
    Ok(sym_eig(&a.sub(b)?)?.values.min())
}
