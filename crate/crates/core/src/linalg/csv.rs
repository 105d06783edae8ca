//! Matrix text format: first line `n`, then `n` comma-separated rows.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::matrix::SymmetricMatrix;

/// A matrix loaded from text, symmetrized as `(M + Mᵗ)/2`.
#[derive(Debug, Clone)]
pub struct CsvMatrix<T> {
    pub matrix: SymmetricMatrix<T>,
    /// Largest `|m_ij - m_ji|` in the file.
    pub max_asymmetry: T,
    /// Set when the asymmetry exceeded the symmetry tolerance.
    pub warning: Option<String>,
}

pub fn read_matrix_csv<T: Scalar>(text: &str) -> Result<CsvMatrix<T>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Malformed("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Malformed(format!("first line must be the dimension, found {header:?}")))?;
    if n == 0 {
        return Err(Error::Malformed("dimension must be at least 1".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Malformed(format!("expected {n} rows, found {row}")))?;
        let values: Vec<&str> = line.split(',').map(str::trim).collect();
        if values.len() != n {
            return Err(Error::Malformed(format!(
                "row {} has {} values, expected {n}",
                row + 1,
                values.len()
            )));
        }
        for v in values {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::Malformed(format!("row {}: {v:?} is not a number", row + 1)))?;
            if !x.is_finite() {
                return Err(Error::NonFinite(format!("row {}", row + 1)));
            }
            data.push(T::lit(x));
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Malformed(format!("unexpected trailing line {extra:?}")));
    }
    let max_abs = data.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let (matrix, max_asymmetry) = SymmetricMatrix::symmetrized(n, data)?;
    let bound = T::symmetry_tol() * max_abs.max(T::one());
    let warning = (max_asymmetry > bound).then(|| {
        format!("input was not symmetric (max |m_ij - m_ji| = {max_asymmetry:e}); symmetrized")
    });
    Ok(CsvMatrix { matrix, max_asymmetry, warning })
}

pub fn write_matrix_csv<T: Scalar>(m: &SymmetricMatrix<T>) -> String {
    let mut out = format!("{}\n", m.n());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let text = "3\n1,1,0\n1,1,0\n0,0,0\n";
        let m = read_matrix_csv::<f64>(text).unwrap();
        assert!(m.warning.is_none());
        assert_eq!(m.matrix.get(0, 1), 1.0);
        let back = read_matrix_csv::<f64>(&write_matrix_csv(&m.matrix)).unwrap();
        assert_eq!(back.matrix, m.matrix);
    }

    #[test]
    fn asymmetric_input_is_symmetrized_with_warning() {
        let m = read_matrix_csv::<f64>("2\n1, 2\n3, 1\n").unwrap();
        assert_eq!(m.matrix.get(0, 1), 2.5);
        assert_eq!(m.max_asymmetry, 1.0);
        assert!(m.warning.is_some());
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_matrix_csv::<f64>("").is_err());
        assert!(read_matrix_csv::<f64>("x\n").is_err());
        assert!(read_matrix_csv::<f64>("2\n1,2\n").is_err());
        assert!(read_matrix_csv::<f64>("2\n1,2\n2\n").is_err());
        assert!(read_matrix_csv::<f64>("1\nfoo\n").is_err());
        assert!(read_matrix_csv::<f64>("1\n1\n2\n").is_err());
    }
}
