use crate::error::Result;
use crate::scalar::Scalar;

use super::ScalarFunction;

/// Relative separation below which `f^{[1]}(a, b)` switches to `f'((a+b)/2)`.
pub const DD_SWITCH: f64 = 1.0e-6;
/// Relative separation below which points of `f^{[2]}` are treated as coincident.
pub const DD2_SWITCH: f64 = 1.0e-4;

fn coincident<T: Scalar>(a: T, b: T, switch: f64) -> bool {
    (a - b).abs() <= T::lit(switch) * T::one().max(a.abs()).max(b.abs())
}

/// First divided difference `(f(a) - f(b)) / (a - b)`, or `f'` at the
/// midpoint when `a` and `b` are numerically coincident.
pub fn div_diff1<T: Scalar>(f: &ScalarFunction, a: T, b: T) -> Result<T> {
    f.eval(a)?;
    f.eval(b)?;
    if coincident(a, b, DD_SWITCH) {
        return f.deriv((a + b) * T::lit(0.5), 1);
    }
    Ok((f.eval(a)? - f.eval(b)?) / (a - b))
}

/// Second divided difference `f^{[2]}(a, b, c)`, symmetric in its arguments.
///
/// Coincident triples give `f''/2`; a coincident pair `(b, b)` with a distinct
/// `a` gives `(f(a) - f(b) - f'(b)(a - b)) / (a - b)²`.
pub fn div_diff2<T: Scalar>(f: &ScalarFunction, a: T, b: T, c: T) -> Result<T> {
    for x in [a, b, c] {
        f.eval(x)?;
    }
    let mut pts = [a, b, c];
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    let [lo, mid, hi] = pts;
    let half = T::lit(0.5);

    if coincident(lo, hi, DD2_SWITCH) {
        let centre = (lo + mid + hi) / T::lit(3.0);
        return Ok(f.deriv(centre, 2)? * half);
    }
    let pair_formula = |double: T, single: T| -> Result<T> {
        let h = single - double;
        Ok((f.eval(single)? - f.eval(double)? - f.deriv(double, 1)? * h) / (h * h))
    };
    if coincident(lo, mid, DD2_SWITCH) {
        return pair_formula((lo + mid) * half, hi);
    }
    if coincident(mid, hi, DD2_SWITCH) {
        return pair_formula((mid + hi) * half, lo);
    }
    Ok((div_diff1(f, lo, mid)? - div_diff1(f, mid, hi)?) / (lo - hi))
}
