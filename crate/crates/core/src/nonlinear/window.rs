use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Observations at integer offsets around an evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Window {
    /// Window over offsets `-lower..` built from `values`; `NaN` entries are skipped.
    pub fn from_values(values: &[f64], lower: usize) -> Window {
        let (x, y) = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .map(|(k, &v)| (k as f64 - lower as f64, v))
            .unzip();
        Window { x, y }
    }

    /// Odd-length window centred on its middle element.
    pub fn centred(values: &[f64]) -> Window {
        Window::from_values(values, values.len() / 2)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Residuals of the polynomial with coefficients `beta` (constant first).
    pub fn residuals(&self, beta: &[f64]) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(&x, &y)| y - eval_poly(beta, x)).collect()
    }
}

pub(crate) fn eval_poly(beta: &[f64], x: f64) -> f64 {
    beta.iter().rev().fold(0.0, |acc, b| acc * x + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Med,
    Rm,
    Lms,
    Lts,
    Lqd,
    Dr,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Med, Method::Rm, Method::Lms, Method::Lts, Method::Lqd, Method::Dr];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Med => "med",
            Method::Rm => "rm",
            Method::Lms => "lms",
            Method::Lts => "lts",
            Method::Lqd => "lqd",
            Method::Dr => "dr",
        }
    }

    pub fn supports_degree(self, degree: usize) -> bool {
        match self {
            Method::Med => degree == 0 || degree == 1,
            Method::Lms | Method::Lts => degree == 1 || degree == 2,
            _ => degree == 1,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown robust method '{s}'")))
    }
}

/// Local polynomial fitted on one window; `level` is the value at offset 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFit {
    pub method: Method,
    /// Coefficients, constant first.
    pub beta: Vec<f64>,
}

impl WindowFit {
    pub fn new(method: Method, beta: Vec<f64>) -> Self {
        WindowFit { method, beta }
    }

    pub fn level(&self) -> f64 {
        self.beta[0]
    }

    pub fn slope(&self) -> f64 {
        self.beta.get(1).copied().unwrap_or(0.0)
    }

    pub fn curvature(&self) -> Option<f64> {
        self.beta.get(2).copied()
    }

    pub fn degree(&self) -> usize {
        self.beta.len() - 1
    }
}

pub(crate) fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Median, averaging the two central values for even counts.
pub fn median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let s = sorted(v);
    let n = s.len();
    Some(if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) })
}

/// Median taking the lower central value for even counts.
pub fn lower_median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let s = sorted(v);
    Some(s[(s.len() - 1) / 2])
}

/// `k`-th smallest value (1-based).
pub(crate) fn order_stat(v: &mut [f64], k: usize) -> f64 {
    *v.select_nth_unstable_by(k - 1, f64::total_cmp).1
}

/// Candidate comparison: objective first (with a relative tolerance), then
/// coefficients in lexicographic order. Both steps are preserved by
/// `y → s·y + a + b·x` with `s > 0`, so fits stay regression equivariant.
pub(crate) fn better(obj: f64, beta: &[f64], best_obj: f64, best: &[f64]) -> bool {
    let tol = 1e-12 * (1.0 + best_obj.abs());
    if obj < best_obj - tol {
        return true;
    }
    if obj > best_obj + tol {
        return false;
    }
    lex_less(beta, best)
}

/// Lexicographic order on coefficients, treating values within rounding
/// of each other as equal.
pub(crate) fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())) {
                Ordering::Equal
            } else {
                x.total_cmp(y)
            }
        })
        .find(|o| o.is_ne())
        == Some(Ordering::Less)
}

/// Small dense solve by Gaussian elimination with partial pivoting.
pub(crate) fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Ordinary least-squares polynomial fit on the selected points.
pub(crate) fn ls_fit(x: &[f64], y: &[f64], idx: &[usize], degree: usize) -> Option<Vec<f64>> {
    let p = degree + 1;
    let mut a = vec![vec![0.0; p]; p];
    let mut b = vec![0.0; p];
    for &i in idx {
        let pw: Vec<f64> = (0..p).map(|e| x[i].powi(e as i32)).collect();
        for r in 0..p {
            b[r] += pw[r] * y[i];
            for c in 0..p {
                a[r][c] += pw[r] * pw[c];
            }
        }
    }
    solve_small(a, b)
}
