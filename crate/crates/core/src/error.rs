use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e} exceeds tolerance {tol:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64, tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("entry ({i}, {j}) = {value} lies outside the domain (-{alpha}, {alpha})")]
    EntryOutOfDomain { i: usize, j: usize, value: f64, alpha: f64 },

    #[error("{x} lies outside the domain (-{alpha}, {alpha})")]
    OutOfDomain { x: f64, alpha: f64 },

    #[error("power series does not converge at {x}: radius is {radius}")]
    Divergent { x: f64, radius: f64 },

    #[error("function is not differentiable to order {order} at {x}: {reason}")]
    NotDifferentiable { x: f64, order: u32, reason: String },

    #[error("function is not analytic at 0: {0}")]
    NotAnalytic(String),

    #[error("pair is not ordered: smallest eigenvalue of A - B is {min_eig:e}")]
    NotOrdered { min_eig: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },

    #[error("operator norm {norm} is not strictly below the domain half-width {alpha}")]
    NormAtBoundary { norm: f64, alpha: f64 },

    #[error("parse error at position {pos}: expected {expected}, found {found:?}")]
    Parse { pos: usize, expected: String, found: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search inconclusive: {0}")]
    SearchInconclusive(String),

    #[error("inconsistent verdicts: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
