use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::matrix::{Spectrum, SymmetricMatrix};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `M = Q diag(values) Qᵗ` with eigenvalues in
/// non-increasing order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Spectrum<T>,
    /// Row-major `n × n` orthogonal matrix of eigenvectors (as columns).
    pub vectors: Vec<T>,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        let n = self.n();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }

    /// `Q diag(g(λ_k)) Qᵗ`, assembled from the upper triangle so the result is
    /// exactly symmetric.
    pub fn recompose_with(&self, mut g: impl FnMut(T) -> T) -> Result<SymmetricMatrix<T>> {
        let n = self.n();
        let mapped: Vec<T> = self.values.as_slice().iter().map(|&l| g(l)).collect();
        if mapped.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("mapped spectrum".into()));
        }
        let q = &self.vectors;
        SymmetricMatrix::from_upper(n, |i, j| {
            (0..n).map(|k| q[i * n + k] * mapped[k] * q[j * n + k]).sum()
        })
    }

    pub fn reconstruct(&self) -> Result<SymmetricMatrix<T>> {
        self.recompose_with(|l| l)
    }
}

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
///
/// Rotations are swept over all off-diagonal pairs until the off-diagonal
/// Frobenius mass drops below machine precision relative to `‖M‖_F`.
pub fn sym_eig<T: Scalar>(m: &SymmetricMatrix<T>) -> Result<SymmetricEigen<T>> {
    let n = m.n();
    let mut a: Vec<T> = m.as_slice().to_vec();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigensolver input".into()));
    }
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let fro = m.frobenius();
    let stop = T::epsilon() * fro;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = if theta >= T::zero() {
                    T::one() / (theta + theta.hypot(T::one()))
                } else {
                    -T::one() / (-theta + theta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let s = t * c;

                // A <- Jᵗ A J on columns p, q, then rows p, q.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].partial_cmp(&a[i * n + i]).expect("finite"));
    let values: Vec<T> = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = v[i * n + k];
        }
    }
    Ok(SymmetricEigen { values: Spectrum::from_sorted(values)?, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[f64]]) -> SymmetricMatrix<f64> {
        SymmetricMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn identity_and_ones() {
        let e = sym_eig(&SymmetricMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 1.0, 1.0]);
        let e = sym_eig(&SymmetricMatrix::<f64>::ones(2)).unwrap();
        assert!((e.values.as_slice()[0] - 2.0).abs() < 1e-15);
        assert!(e.values.as_slice()[1].abs() < 1e-15);
    }

    #[test]
    fn two_by_two_matches_characteristic_roots() {
        // λ² - 7λ + 1 = 0
        let e = sym_eig(&sym(&[&[2.0, 3.0], &[3.0, 5.0]])).unwrap();
        let disc = 45f64.sqrt();
        assert!((e.values.as_slice()[0] - (7.0 + disc) / 2.0).abs() < 1e-12);
        assert!((e.values.as_slice()[1] - (7.0 - disc) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        let m = sym(&[
            &[4.0, -1.0, 0.5, 2.0],
            &[-1.0, 3.0, 0.0, 1.0],
            &[0.5, 0.0, -2.0, 0.3],
            &[2.0, 1.0, 0.3, 1.0],
        ]);
        let e = sym_eig(&m).unwrap();
        let r = e.reconstruct().unwrap();
        assert!(r.sub(&m).unwrap().frobenius() <= 1e-13 * m.frobenius().max(1.0));
        for a in 0..4 {
            for b in 0..4 {
                let dot: f64 = e.vector(a).iter().zip(e.vector(b)).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn diagonal_input_keeps_tie_order() {
        let e = sym_eig(&SymmetricMatrix::<f64>::diagonal(&[1.0, 2.0, 1.0])).unwrap();
        assert_eq!(e.values.as_slice(), &[2.0, 1.0, 1.0]);
        // ties: original index 0 precedes index 2
        assert_eq!(e.vector(1), vec![1.0, 0.0, 0.0]);
        assert_eq!(e.vector(2), vec![0.0, 0.0, 1.0]);
    }
}
