use nalgebra::{DMatrix, DVector};

use super::MovingAverage;
use crate::error::{invalid, Error, Result};
use crate::linalg;

/// Symmetric local-polynomial filter `θ = K X (X'KX)^{-1} e1` on `-h..=h`.
pub fn local_poly_filter(h: usize, degree: usize, kernel: &[f64]) -> Result<MovingAverage> {
    if kernel.len() != 2 * h + 1 {
        return invalid(format!("kernel has {} weights, expected {}", kernel.len(), 2 * h + 1));
    }
    if degree > 2 * h {
        return invalid(format!("degree {degree} exceeds window size {}", 2 * h + 1));
    }
    if kernel.iter().any(|&k| !(k > 0.0) || !k.is_finite()) {
        return invalid("kernel weights must be positive");
    }
    let hi = h as isize;
    let x = linalg::poly_design(&linalg::positions(-hi, hi), degree);
    let mut e1 = DVector::zeros(degree + 1);
    e1[0] = 1.0;
    let weights = wls_weights(&x, kernel, &e1)
        .ok_or_else(|| Error::NumericalRank(format!("X'KX singular for h={h}, d={degree}")))?;
    MovingAverage::new(h, h, weights)
}

/// `K X (X'KX)^{-1} c` for a design `X` and kernel diagonal `K`.
pub(crate) fn wls_weights(x: &DMatrix<f64>, kernel: &[f64], target: &DVector<f64>) -> Option<Vec<f64>> {
    let k = DVector::from_column_slice(kernel);
    let kx = DMatrix::from_fn(x.nrows(), x.ncols(), |r, c| k[r] * x[(r, c)]);
    let gram = x.transpose() * &kx;
    let coef = linalg::solve(gram, target)?;
    Some((kx * coef).iter().cloned().collect())
}
