//! Entrywise calculus `f[A] = [f(a_ij)]`, the spectral calculus `f(A)`, and
//! Schur (Hadamard) products and powers.

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, SymmetricMatrix};
use crate::scalar::Scalar;
use crate::scalarfn::ScalarFunction;

/// Default number of Schur powers kept by [`series_entrywise_fn`].
pub const DEFAULT_TRUNCATION: usize = 64;

/// `f[A]`. Symmetry of the output is inherited from `A` and checked, never
/// repaired.
pub fn apply_entrywise<T: Scalar>(f: &ScalarFunction, a: &SymmetricMatrix<T>) -> Result<SymmetricMatrix<T>> {
    let n = a.n();
    let alpha = f.domain_alpha();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = a.get(i, j);
            if !f.in_domain(x.to_f64_lossy()) {
                return Err(Error::EntryOutOfDomain { i, j, value: x.to_f64_lossy(), alpha });
            }
            data.push(f.eval(x)?);
        }
    }
    SymmetricMatrix::from_data(n, data, a.symmetry_tol())
}

/// `A ∘ B`
pub fn schur_product<T: Scalar>(a: &SymmetricMatrix<T>, b: &SymmetricMatrix<T>) -> Result<SymmetricMatrix<T>> {
    a.hadamard(b)
}

/// `A^{(k)}`, the `k`-fold Schur product; `k = 0` gives the all-ones matrix.
pub fn schur_power<T: Scalar>(a: &SymmetricMatrix<T>, k: u32) -> SymmetricMatrix<T> {
    let n = a.n();
    SymmetricMatrix::from_fn(n, |i, j| a.get(i, j).powi(k as i32)).expect("powers of a symmetric matrix stay symmetric")
}

/// `f(A) = Q f(Λ) Qᵗ`.
pub fn functional_calculus<T: Scalar>(f: &ScalarFunction, a: &SymmetricMatrix<T>) -> Result<SymmetricMatrix<T>> {
    let eig = sym_eig(a)?;
    let mapped: Vec<T> = eig.values.as_slice().iter().map(|&l| f.eval(l)).collect::<Result<_>>()?;
    let mut it = mapped.into_iter();
    eig.recompose_with(|_| it.next().expect("one value per eigenvalue"))
}

/// Partial sum `Σ_{k≤K} c_k A^{(k)}` together with a bound on the entrywise
/// truncation error, `Σ_{k>K} |c_k| m^k` with `m = max |a_ij|`, taken over the
/// coefficients that were supplied.
pub fn series_entrywise<T: Scalar>(
    coeffs: &[f64],
    a: &SymmetricMatrix<T>,
    truncation: usize,
) -> Result<(SymmetricMatrix<T>, f64)> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("series coefficients".into()));
    }
    let kept = &coeffs[..coeffs.len().min(truncation + 1)];
    let m = a.max_abs().to_f64_lossy();
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .skip(kept.len())
        .map(|(k, c)| c.abs() * m.powi(k as i32))
        .sum();
    Ok((horner_entrywise(kept, a)?, tail))
}

fn horner_entrywise<T: Scalar>(coeffs: &[f64], a: &SymmetricMatrix<T>) -> Result<SymmetricMatrix<T>> {
    SymmetricMatrix::from_fn(a.n(), |i, j| {
        let x = a.get(i, j);
        coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + T::lit(c))
    })
}

/// Number of extra coefficients inspected beyond the truncation when
/// estimating the tail of a function's series.
const TAIL_LOOKAHEAD: usize = 256;

/// Truncated Taylor series of `f` at 0 applied entrywise, with an estimate of
/// the dropped tail: explicit terms for the next [`TAIL_LOOKAHEAD`] powers
/// plus a geometric remainder fitted to the last of them.
pub fn series_entrywise_fn<T: Scalar>(
    f: &ScalarFunction,
    a: &SymmetricMatrix<T>,
    truncation: usize,
) -> Result<(SymmetricMatrix<T>, f64)> {
    let radius = f.radius_at(0.0);
    if !(radius > 0.0) {
        return Err(Error::NotAnalytic(f.to_string()));
    }
    let n = a.n();
    for i in 0..n {
        for j in 0..n {
            let x = a.get(i, j).to_f64_lossy();
            if x.abs() >= radius {
                return Err(Error::Divergent { x, radius });
            }
        }
    }
    let total = truncation + 1 + TAIL_LOOKAHEAD;
    let coeffs: Vec<f64> = (0..total as u32).map(|k| f.taylor_coeff(k)).collect::<Result<_>>()?;
    let (partial, explicit) = series_entrywise(&coeffs, a, truncation)?;

    let m = a.max_abs().to_f64_lossy();
    let terms: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c.abs() * m.powi(k as i32)).collect();
    let window = &terms[total - 16..];
    let ratio = window
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max)
        .max(m / radius);
    let remainder = if ratio < 1.0 {
        window[window.len() - 1] * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    Ok((partial, explicit + remainder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_psd, loewner_geq};
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> SymmetricMatrix<f64> {
        SymmetricMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn max_diff(a: &SymmetricMatrix<f64>, b: &SymmetricMatrix<f64>) -> f64 {
        a.sub(b).unwrap().max_abs()
    }

    #[test]
    fn power_of_scaled_ones() {
        let a = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        for p in [0.5, 1.0, 2.5] {
            let got = apply_entrywise(&ScalarFunction::abs_power(p).unwrap(), &a).unwrap();
            assert!(max_diff(&got, &a.scale(2f64.powf(1.0 - p))) < 1e-15);
        }
    }

    #[test]
    fn signed_power_fixes_sign_pattern() {
        let b = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        for p in [0.5, 1.2, 3.0] {
            let got = apply_entrywise(&ScalarFunction::signed_power(p).unwrap(), &b).unwrap();
            assert_eq!(got, b);
        }
    }

    #[test]
    fn exp_of_zero_is_ones() {
        let got = apply_entrywise(&ScalarFunction::Exp, &SymmetricMatrix::<f64>::zeros(3)).unwrap();
        assert_eq!(got, SymmetricMatrix::ones(3));
    }

    #[test]
    fn domain_errors_name_the_entry() {
        let a = m(&[&[0.1, 0.2], &[0.2, 1.5]]);
        match apply_entrywise(&ScalarFunction::NegLog1m, &a) {
            Err(Error::EntryOutOfDomain { i: 1, j: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schur_products_and_powers() {
        let a = m(&[&[2.0, 3.0], &[3.0, 5.0]]);
        let j = SymmetricMatrix::<f64>::ones(2);
        assert_eq!(schur_product(&a, &j).unwrap(), a);
        assert_eq!(schur_product(&j, &j).unwrap(), j);
        assert_eq!(schur_product(&a, &a).unwrap(), m(&[&[4.0, 9.0], &[9.0, 25.0]]));
        assert!(schur_product(&a, &SymmetricMatrix::ones(3)).is_err());

        assert_eq!(schur_power(&a, 0), j);
        assert_eq!(schur_power(&a, 1), a);
        assert_eq!(schur_power(&j, 7), j);
        assert_eq!(schur_power(&m(&[&[1.0, 2.0], &[2.0, 4.0]]), 2), m(&[&[1.0, 4.0], &[4.0, 16.0]]));
    }

    #[test]
    fn spectral_calculus_examples() {
        let a = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let cube_root = ScalarFunction::abs_power(1.0 / 3.0).unwrap();
        assert!(max_diff(&functional_calculus(&cube_root, &a).unwrap(), &a) < 1e-12);
        assert!(max_diff(&functional_calculus(&ScalarFunction::identity(), &a).unwrap(), &a) < 1e-14);

        let d = SymmetricMatrix::diagonal(&[0.0, 2f64.ln()]);
        let got = functional_calculus(&ScalarFunction::Exp, &d).unwrap();
        assert!(max_diff(&got, &SymmetricMatrix::diagonal(&[1.0, 2.0])) < 1e-14);

        // eigenvalue 1.2 is outside (-1, 1) though every entry is inside
        let c = m(&[&[0.6, 0.6], &[0.6, 0.6]]);
        assert!(apply_entrywise(&ScalarFunction::NegLog1m, &c).is_ok());
        assert!(matches!(functional_calculus(&ScalarFunction::NegLog1m, &c), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn series_examples() {
        let exp: Vec<f64> = (0..40).map(|k| 1.0 / (1..=k).map(|j| j as f64).product::<f64>()).collect();
        let (s, tail) = series_entrywise(&exp, &SymmetricMatrix::<f64>::zeros(2), 30).unwrap();
        assert_eq!(s, SymmetricMatrix::ones(2));
        assert_eq!(tail, 0.0);

        let i2 = SymmetricMatrix::<f64>::identity(2);
        let (s, tail) = series_entrywise(&exp, &i2, 30).unwrap();
        assert!(max_diff(&s, &apply_entrywise(&ScalarFunction::Exp, &i2).unwrap()) < 1e-12);
        assert!(tail < 1e-30);

        let a = m(&[&[0.3, -7.0], &[-7.0, 2.0]]);
        assert_eq!(series_entrywise(&[0.0, 1.0], &a, 64).unwrap().0, a);
    }

    #[test]
    fn function_series_within_bound() {
        let a = m(&[&[0.9, -0.5], &[-0.5, 0.2]]);
        for f in [ScalarFunction::Exp, ScalarFunction::NegLog1m, ScalarFunction::neg_power(0.5).unwrap()] {
            let (s, tail) = series_entrywise_fn(&f, &a, DEFAULT_TRUNCATION).unwrap();
            let exact = apply_entrywise(&f, &a).unwrap();
            let err = max_diff(&s, &exact);
            assert!(err <= tail + 1e-13, "{f}: error {err} exceeds bound {tail}");
        }
        let far = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(series_entrywise_fn(&ScalarFunction::NegLog1m, &far, 8), Err(Error::Divergent { .. })));
    }

    #[test]
    fn works_in_single_precision() {
        let a = SymmetricMatrix::<f32>::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let got = apply_entrywise(&ScalarFunction::abs_power(2.0).unwrap(), &a).unwrap();
        assert!((got.get(0, 1) - 0.25f32).abs() < 1e-7);
        assert_eq!(schur_power(&a, 2), got);
    }

    fn gram(n: usize, entries: Vec<f64>) -> SymmetricMatrix<f64> {
        SymmetricMatrix::from_upper(n, |i, j| (0..n).map(|k| entries[k * n + i] * entries[k * n + j]).sum()).unwrap()
    }

    fn leaves() -> impl Strategy<Value = ScalarFunction> {
        prop_oneof![
            Just(ScalarFunction::Exp),
            Just(ScalarFunction::NegLog1m),
            (0.05f64..0.95).prop_map(|p| ScalarFunction::neg_power(p).unwrap()),
            (0.0f64..5.0).prop_map(|p| ScalarFunction::abs_power(p).unwrap()),
            (0.0f64..5.0).prop_map(|p| ScalarFunction::signed_power(p).unwrap()),
            prop::collection::vec(-3.0f64..3.0, 1..6).prop_map(|c| ScalarFunction::polynomial(c).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn one_by_one_calculi_agree(f in leaves(), x in -0.99f64..0.99) {
            let a = SymmetricMatrix::from_rows(vec![vec![x]]).unwrap();
            let e = apply_entrywise(&f, &a).unwrap().get(0, 0);
            let s = functional_calculus(&f, &a).unwrap().get(0, 0);
            prop_assert!((e - s).abs() <= 1e-14 * e.abs().max(1.0));
        }

        #[test]
        fn schur_powers_preserve_order(
            n in 2usize..=6,
            g in prop::collection::vec(-1.0f64..1.0, 36),
            h in prop::collection::vec(-1.0f64..1.0, 36),
        ) {
            let b = gram(n, g);
            let a = b.add(&gram(n, h)).unwrap();
            for k in 1..=3u32 {
                let (ak, bk) = (schur_power(&a, k), schur_power(&b, k));
                prop_assert!(loewner_geq(&ak, &bk, 1e-9).unwrap());
                prop_assert!(is_psd(&bk, 1e-9).unwrap().0);
            }
            for k in 2..=3u32 {
                for lambda in [0.25, 0.5, 0.75] {
                    let mix = schur_power(&a.lerp(&b, lambda).unwrap(), k);
                    let chord = schur_power(&a, k).lerp(&schur_power(&b, k), lambda).unwrap();
                    prop_assert!(loewner_geq(&chord, &mix, 1e-9).unwrap());
                }
            }
        }
    }
}
