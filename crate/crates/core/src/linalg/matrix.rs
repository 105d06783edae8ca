use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense real symmetric matrix, row-major.
///
/// Symmetry is checked on construction against `symmetry_tol * max(1, max|a_ij|)`;
/// entries are stored exactly as given (no silent repair).
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    data: Vec<T>,
    symmetry_tol: T,
}

impl<T: Scalar> SymmetricMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows_with_tol(rows, T::symmetry_tol())
    }

    pub fn from_rows_with_tol(rows: Vec<Vec<T>>, symmetry_tol: T) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: row.len() });
            }
            data.extend(row);
        }
        Self::from_data(n, data, symmetry_tol)
    }

    /// Builds from a row-major buffer of length `n * n`.
    pub fn from_data(n: usize, data: Vec<T>, symmetry_tol: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: data.len() });
        }
        if !(symmetry_tol >= T::zero()) {
            return Err(Error::InvalidArgument("symmetry tolerance must be nonnegative".into()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        let m = Self { n, data, symmetry_tol };
        m.check_symmetry()?;
        Ok(m)
    }

    /// Builds the matrix `[g(i, j)]`, evaluating every entry.
    pub fn from_fn(n: usize, mut g: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(g(i, j));
            }
        }
        Self::from_data(n, data, T::symmetry_tol())
    }

    /// Builds the matrix from its upper triangle; `g` is called for `i <= j`.
    pub fn from_upper(n: usize, mut g: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = g(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self::from_data(n, data, T::symmetry_tol())
    }

    /// Symmetrizes `(M + Mᵗ)/2` and reports the largest asymmetry that was removed.
    pub fn symmetrized(n: usize, data: Vec<T>) -> Result<(Self, T)> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: data.len() });
        }
        let half = T::lit(0.5);
        let mut worst = T::zero();
        let mut out = data.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                worst = worst.max((a - b).abs());
                let mean = (a + b) * half;
                out[i * n + j] = mean;
                out[j * n + i] = mean;
            }
        }
        Ok((Self::from_data(n, out, T::symmetry_tol())?, worst))
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n], symmetry_tol: T::symmetry_tol() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// The all-ones matrix `J`, the unit of the Schur product.
    pub fn ones(n: usize) -> Self {
        Self { n, data: vec![T::one(); n * n], symmetry_tol: T::symmetry_tol() }
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Rank-one `ξξᵗ`.
    pub fn outer(xi: &[T]) -> Self {
        let n = xi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = xi[i] * xi[j];
            }
        }
        m
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.n;
        let bound = self.symmetry_tol * self.max_abs().max(T::one());
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (self.data[i * n + j] - self.data[j * n + i]).abs();
                if gap > bound {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        gap: gap.to_f64_lossy(),
                        tol: bound.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symmetry_tol(&self) -> T {
        self.symmetry_tol
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        self.diag().into_iter().sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Result<Self> {
        self.same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Self::from_data(self.n, data, self.symmetry_tol.max(other.symmetry_tol))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Entrywise (Schur/Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| c * x).collect(),
            symmetry_tol: self.symmetry_tol,
        }
    }

    /// `λ·self + (1-λ)·other`.
    pub fn lerp(&self, other: &Self, lambda: T) -> Result<Self> {
        let mu = T::one() - lambda;
        self.zip_with(other, |a, b| lambda * a + mu * b)
    }

    /// `self²`; the product of a symmetric matrix with itself is exactly symmetric
    /// in floating point, since both triangles accumulate the same products.
    pub fn square(&self) -> Self {
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| self.get(i, k) * self.get(k, j)).sum();
            }
        }
        Self { n, data, symmetry_tol: self.symmetry_tol }
    }

    /// `[[self, other], [other, other]]`, a `2n × 2n` symmetric block matrix.
    pub fn doubling_embedding(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.n;
        Self::from_fn(2 * n, |i, j| {
            let (bi, bj) = (i / n, j / n);
            let (ii, jj) = (i % n, j % n);
            if bi == 0 && bj == 0 {
                self.get(ii, jj)
            } else {
                other.get(ii, jj)
            }
        })
    }

    pub fn to_square(&self) -> SquareMatrix<T> {
        SquareMatrix { n: self.n, data: self.data.clone() }
    }

    pub fn cast<U: Scalar>(&self) -> SymmetricMatrix<U> {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|x| U::lit(x.to_f64_lossy())).collect(),
            symmetry_tol: U::symmetry_tol(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for SymmetricMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n.max(1))).finish()
    }
}

/// Dense square matrix with no structure assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: row.len() });
            }
            data.extend(row);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }
}

/// Real vector kept in non-increasing order: eigenvalues, singular values,
/// or a sorted diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Scalar> Spectrum<T> {
    /// Sorts into non-increasing order. The sort is stable, so ties keep the
    /// order in which they were computed.
    pub fn from_unsorted(mut values: Vec<T>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("spectrum".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(Self { values })
    }

    pub fn from_sorted(values: Vec<T>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("spectrum".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("spectrum values are not non-increasing".into()));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_non_finite() {
        let err = SymmetricMatrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { i: 0, j: 1, .. }));
        let err = SymmetricMatrix::<f64>::from_rows(vec![vec![f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
        assert!(SymmetricMatrix::<f64>::from_rows(vec![]).is_err());
    }

    #[test]
    fn symmetrized_reports_gap() {
        let (m, gap) = SymmetricMatrix::<f64>::symmetrized(2, vec![1.0, 2.0, 2.5, 1.0]).unwrap();
        assert_eq!(m.get(0, 1), 2.25);
        assert_eq!(gap, 0.5);
    }

    #[test]
    fn spectrum_sort_is_stable_and_decreasing() {
        let s = Spectrum::from_unsorted(vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.as_slice(), &[3.0, 2.0, 1.0]);
        assert!(Spectrum::from_sorted(vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn doubling_embedding_layout() {
        let a = SymmetricMatrix::<f64>::diagonal(&[2.0, 3.0]);
        let b = SymmetricMatrix::<f64>::ones(2);
        let e = a.doubling_embedding(&b).unwrap();
        assert_eq!(e.n(), 4);
        assert_eq!(e.get(0, 0), 2.0);
        assert_eq!(e.get(0, 1), 0.0);
        assert_eq!(e.get(0, 3), 1.0);
        assert_eq!(e.get(3, 2), 1.0);
    }
}

/// Serialized as an array of rows.
impl<T: Scalar + serde::Serialize> serde::Serialize for SymmetricMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.data.chunks(self.n))
    }
}
