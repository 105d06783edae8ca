use crate::error::Result;
use crate::scalar::Scalar;

use super::matrix::{Spectrum, SquareMatrix};

const MAX_SWEEPS: usize = 100;

/// Singular values in non-increasing order, via one-sided (Hestenes) Jacobi
/// orthogonalization of the columns.
pub fn singular_values<T: Scalar>(m: &SquareMatrix<T>) -> Result<Spectrum<T>> {
    let n = m.n();
    // column-major working copy
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..n {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    alpha = alpha + x * x;
                    beta = beta + y * y;
                    gamma = gamma + x * y;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + zeta.hypot(T::one()))
                } else {
                    -T::one() / (-zeta + zeta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let s = c * t;
                for i in 0..n {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * x - s * y;
                    cols[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let values = cols.iter().map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt()).collect();
    Spectrum::from_unsorted(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_columns() {
        let m = SquareMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let s = singular_values(&m).unwrap();
        let r2 = 2f64.sqrt();
        assert!((s.as_slice()[0] - r2).abs() < 1e-15);
        assert!((s.as_slice()[1] - r2).abs() < 1e-15);
    }

    #[test]
    fn non_symmetric_input() {
        // [[1, 2], [0, 0]] has singular values (√5, 0)
        let m = SquareMatrix::from_rows(vec![vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = singular_values(&m).unwrap();
        assert!((s.as_slice()[0] - 5f64.sqrt()).abs() < 1e-14);
        assert!(s.as_slice()[1].abs() < 1e-14);
    }

    #[test]
    fn rank_one_unit_vector() {
        let xi = [0.6f64, 0.0, 0.8];
        let rows = (0..3).map(|i| (0..3).map(|j| xi[i] * xi[j]).collect()).collect();
        let s = singular_values(&SquareMatrix::from_rows(rows).unwrap()).unwrap();
        assert!((s.as_slice()[0] - 1.0).abs() < 1e-15);
        assert!(s.as_slice()[1].abs() < 1e-15 && s.as_slice()[2].abs() < 1e-15);
    }
}
