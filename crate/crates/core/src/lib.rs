//! Entrywise (Hadamard/Schur) matrix calculus under the positive-semidefinite
//! order.
//!
//! The crate evaluates the entrywise image `f[A] = [f(a_ij)]` and the spectral
//! image `f(A)` of real symmetric matrices, tests whether a scalar function is
//! Schur-positive, Schur-monotone or Schur-convex of a given order, checks the
//! weak-majorization bounds satisfied by such functions, and builds explicit
//! witnesses showing where those bounds stop holding.
//!
//! The dense linear algebra, the majorization calculus and the two matrix
//! calculi are generic over the scalar type (`f32` or `f64`). Randomized
//! testing and witness construction run in `f64`; the aliases below name the
//! concrete types used there.

pub mod counterexamples;
pub mod entrywise;
pub mod error;
pub mod linalg;
pub mod majorization;
pub mod order_testing;
pub mod scalar;
pub mod scalarfn;

pub use error::{Error, Result};
pub use linalg::{NormKind, SquareMatrix, Spectrum, SymmetricEigen, SymmetricMatrix};
pub use majorization::MajorizationVerdict;
pub use scalar::Scalar;
pub use scalarfn::{ClassVerdict, FunctionClass, ScalarFunction};

pub type SymmetricMatrix64 = SymmetricMatrix<f64>;
pub type SymmetricMatrix32 = SymmetricMatrix<f32>;
pub type SquareMatrix64 = SquareMatrix<f64>;
pub type SquareMatrix32 = SquareMatrix<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;

pub type MajorizationVerdict64 = MajorizationVerdict<f64>;
