//! Small dense linear-algebra helpers over `nalgebra`.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Design matrix with rows `(1, x, x², …, x^degree)`.
pub fn poly_design(positions: &[f64], degree: usize) -> DMatrix<f64> {
    DMatrix::from_fn(positions.len(), degree + 1, |r, c| positions[r].powi(c as i32))
}

/// Integer window positions `lo..=hi` as floats.
pub fn positions(lo: isize, hi: isize) -> Vec<f64> {
    (lo..=hi).map(|j| j as f64).collect()
}

/// Numerical column rank from the singular values.
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * top).count()
}

/// Solve a square system by LU with partial pivoting, refusing
/// numerically singular matrices.
pub fn solve(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let n = a.nrows();
    if rank(&a) < n {
        return None;
    }
    a.lu().solve(b)
}

/// Residual of the least-squares projection of `col` onto the span of `basis`.
pub fn projection_residual(basis: &DMatrix<f64>, col: &DVector<f64>) -> DVector<f64> {
    if basis.ncols() == 0 {
        return col.clone();
    }
    let svd = basis.clone().svd(true, true);
    match svd.solve(col, RANK_TOL) {
        Ok(coef) => col - basis * coef,
        Err(_) => col.clone(),
    }
}
