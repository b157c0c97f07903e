//! Clamped cubic B-splines fitted by constrained least squares.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const DEGREE: usize = 3;

/// Clamped cubic B-spline on `[0, 1]` with values in `R^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct BSpline<const D: usize> {
    knots: Vec<f64>,
    control: Vec<[f64; D]>,
}

impl<const D: usize> BSpline<D> {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn control_points(&self) -> &[[f64; D]] {
        &self.control
    }

    pub fn eval(&self, t: f64) -> [f64; D] {
        let t = t.clamp(0.0, 1.0);
        let span = find_span(&self.knots, self.control.len(), t);
        let basis = basis_funs(&self.knots, span, t);
        let mut out = [0.0; D];
        for (k, b) in basis.iter().enumerate() {
            let c = &self.control[span - DEGREE + k];
            for d in 0..D {
                out[d] += b * c[d];
            }
        }
        out
    }
}

/// Knot span index `k` with `knots[k] ≤ t < knots[k+1]`; `t = 1` maps to the last span.
fn find_span(knots: &[f64], n_ctrl: usize, t: f64) -> usize {
    let last = n_ctrl - 1;
    if t >= knots[last + 1] {
        return last;
    }
    // knots[DEGREE..=last+1] is nondecreasing; binary search the span.
    let (mut lo, mut hi) = (DEGREE, last + 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if t < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// The four nonzero cubic basis values on `span` (Cox-de Boor triangle).
fn basis_funs(knots: &[f64], span: usize, t: f64) -> [f64; DEGREE + 1] {
    let mut n = [0.0; DEGREE + 1];
    let mut left = [0.0; DEGREE + 1];
    let mut right = [0.0; DEGREE + 1];
    n[0] = 1.0;
    for j in 1..=DEGREE {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        let mut saved = 0.0;
        for r in 0..j {
            let denom = right[r + 1] + left[j - r];
            let temp = if denom == 0.0 { 0.0 } else { n[r] / denom };
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// Clamped knot vector for `n_ctrl` control points that keeps at least one
/// parameter in every span (averaging for interpolation, the de Boor
/// placement for approximation).
fn knot_vector(params: &[f64], n_ctrl: usize) -> Vec<f64> {
    let n = params.len();
    let mut knots = vec![0.0; n_ctrl + DEGREE + 1];
    for k in knots.iter_mut().skip(n_ctrl) {
        *k = 1.0;
    }
    let interior = n_ctrl - DEGREE - 1;
    if n_ctrl == n {
        for j in 1..=interior {
            knots[DEGREE + j] = params[j..j + DEGREE].iter().sum::<f64>() / DEGREE as f64;
        }
    } else {
        let d = n as f64 / (n_ctrl - DEGREE) as f64;
        for j in 1..=interior {
            let jd = j as f64 * d;
            let i = jd as usize;
            let alpha = jd - i as f64;
            knots[DEGREE + j] = (1.0 - alpha) * params[i - 1] + alpha * params[i];
        }
    }
    knots
}

/// Least-squares clamped cubic fit with both end values interpolated.
///
/// Minimizes `Σ ‖S(t_i) − y_i‖² + λ Σ_k ‖P_{k−1} − 2P_k + P_{k+1}‖²` over the
/// interior control points, with `P_0 = y_0` and `P_{m−1} = y_{N−1}`.
/// `params` must be nondecreasing with `params[0] = 0`, `params[N−1] = 1`.
pub fn fit_clamped_cubic<const D: usize>(
    params: &[f64],
    values: &[[f64; D]],
    n_ctrl: usize,
    smoothing: f64,
) -> Result<BSpline<D>> {
    let n = params.len();
    if n != values.len() {
        return Err(Error::DegenerateInput("parameter and value counts differ"));
    }
    if n_ctrl < DEGREE + 1 || n_ctrl > n {
        return Err(Error::InvalidConfig(
            "spline control points must be in [4, number of points]",
        ));
    }
    if !(smoothing >= 0.0) {
        return Err(Error::InvalidConfig("spline smoothing weight must be >= 0"));
    }
    let knots = knot_vector(params, n_ctrl);

    // Full normal equations over all control points.
    let mut m = vec![vec![0.0; n_ctrl]; n_ctrl];
    let mut rhs = vec![[0.0; D]; n_ctrl];
    for (t, y) in params.iter().zip(values) {
        let span = find_span(&knots, n_ctrl, *t);
        let b = basis_funs(&knots, span, *t);
        let first = span - DEGREE;
        for a in 0..=DEGREE {
            for c in 0..=DEGREE {
                m[first + a][first + c] += b[a] * b[c];
            }
            for d in 0..D {
                rhs[first + a][d] += b[a] * y[d];
            }
        }
    }
    if smoothing > 0.0 {
        for k in 1..n_ctrl - 1 {
            let idx = [k - 1, k, k + 1];
            let coef = [1.0, -2.0, 1.0];
            for a in 0..3 {
                for c in 0..3 {
                    m[idx[a]][idx[c]] += smoothing * coef[a] * coef[c];
                }
            }
        }
    }

    let first = values[0];
    let last = values[n - 1];
    let unknowns = n_ctrl - 2;
    let mut a = vec![vec![0.0; unknowns]; unknowns];
    let mut b = vec![[0.0; D]; unknowns];
    for i in 0..unknowns {
        let row = i + 1;
        for j in 0..unknowns {
            a[i][j] = m[row][j + 1];
        }
        for d in 0..D {
            b[i][d] = rhs[row][d] - m[row][0] * first[d] - m[row][n_ctrl - 1] * last[d];
        }
    }
    let interior = solve_dense(a, b)?;

    let mut control = Vec::with_capacity(n_ctrl);
    control.push(first);
    control.extend(interior);
    control.push(last);
    Ok(BSpline { knots, control })
}

/// Gaussian elimination with partial pivoting for `A X = B` (B has `D` columns).
fn solve_dense<const D: usize>(mut a: Vec<Vec<f64>>, mut b: Vec<[f64; D]>) -> Result<Vec<[f64; D]>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    if !(scale > 0.0) {
        return Err(Error::DegenerateInput("spline system is singular"));
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if !(a[piv][col].abs() > 1e-13 * scale) {
            return Err(Error::DegenerateInput(
                "spline system is singular (too few distinct parameters)",
            ));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            let pivot_row = b[col];
            for d in 0..D {
                b[r][d] -= f * pivot_row[d];
            }
        }
    }
    let mut x = vec![[0.0; D]; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            for d in 0..D {
                acc[d] -= a[r][c] * x[c][d];
            }
        }
        for d in 0..D {
            x[r][d] = acc[d] / a[r][r];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn partition_of_unity() {
        let params = uniform(12);
        let knots = knot_vector(&params, 7);
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let span = find_span(&knots, 7, t);
            let s: f64 = basis_funs(&knots, span, t).iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reproduces_cubic_polynomial() {
        let params = uniform(15);
        let f = |t: f64| [1.0 - 2.0 * t + 0.5 * t * t * t];
        let vals: Vec<[f64; 1]> = params.iter().map(|t| f(*t)).collect();
        let s = fit_clamped_cubic(&params, &vals, 6, 0.0).unwrap();
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            assert!((s.eval(t)[0] - f(t)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolates_when_saturated() {
        let params = [0.0, 0.1, 0.35, 0.6, 0.8, 1.0];
        let vals = [[0.0], [1.0], [-1.0], [2.0], [0.5], [0.0]];
        let s = fit_clamped_cubic(&params, &vals, 6, 0.0).unwrap();
        for (t, v) in params.iter().zip(&vals) {
            assert!((s.eval(*t)[0] - v[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn endpoints_fixed_with_smoothing() {
        let params = uniform(9);
        let vals: Vec<[f64; 2]> = params.iter().map(|t| [libm::sin(*t), libm::cos(3.0 * t)]).collect();
        let s = fit_clamped_cubic(&params, &vals, 5, 10.0).unwrap();
        assert_eq!(s.eval(0.0), vals[0]);
        assert_eq!(s.eval(1.0), vals[8]);
    }

    #[test]
    fn control_count_bounds() {
        let params = uniform(5);
        let vals = [[0.0]; 5];
        assert!(fit_clamped_cubic(&params, &vals, 3, 0.0).is_err());
        assert!(fit_clamped_cubic(&params, &vals, 6, 0.0).is_err());
        assert!(fit_clamped_cubic(&params, &vals, 4, -1.0).is_err());
    }
}
