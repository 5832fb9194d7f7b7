use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::filters::MovingAverage;
use crate::series::TimeSeries;

/// Which denominator `σ̂²` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sigma2Form {
    /// `(n−p−f)(1 − 2θ₀ + Σθ²)`, i.e. `tr(Δ)`.
    #[default]
    TraceDelta,
    /// `(n−p−f)(1 − 2θ₀² + Σθ²)`, kept for comparison only.
    SquaredCentre,
}

/// Residual filter `w = e₀ − θ` and the quantities derived from it for a
/// uniform application over `n` observations.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherSpectrum {
    /// `w` on offsets `-p..=f`.
    pub w: Vec<f64>,
    /// Autocorrelations `L_0..=L_{p+f}` of `w`.
    pub l: Vec<f64>,
    pub trace_delta: f64,
    pub trace_delta2: f64,
    /// `tr(Δ)² / tr(Δ²)`.
    pub nu: f64,
    /// `tr(H)`.
    pub nu1: f64,
    /// `tr(H'H)`.
    pub nu2: f64,
}

fn usable_rows(theta: &MovingAverage, n: usize) -> Result<usize> {
    let span = theta.lower() + theta.upper();
    if n <= span {
        return invalid(format!("n={n} does not exceed the filter span p+f={span}"));
    }
    Ok(n - span)
}

/// `1 − 2θ₀ + Σθ²`: squared norm of the residual filter.
pub fn residual_norm2(theta: &MovingAverage) -> f64 {
    1.0 - 2.0 * theta.weight(0) + theta.sum_squares()
}

/// `σ̂²` from the residuals of a uniform application of `theta`.
pub fn sigma2_hat(series: &TimeSeries, theta: &MovingAverage, form: Sigma2Form) -> Result<f64> {
    series.require_complete()?;
    let y = series.values();
    let m = usable_rows(theta, y.len())?;
    let rss: f64 = (theta.lower()..y.len() - theta.upper())
        .map(|t| (y[t] - theta.apply_at(y, t).unwrap()).powi(2))
        .sum();
    let centre = theta.weight(0);
    let norm = match form {
        Sigma2Form::TraceDelta => residual_norm2(theta),
        Sigma2Form::SquaredCentre => 1.0 - 2.0 * centre * centre + theta.sum_squares(),
    };
    let denom = m as f64 * norm;
    if !(denom > 0.0) {
        return Err(Error::DegenerateFilter(format!("variance denominator is {denom}")));
    }
    Ok(rss / denom)
}

/// `tr(Δ) = (n−p−f)(1 − 2θ₀ + Σθ²)`.
pub fn trace_delta(theta: &MovingAverage, n: usize) -> Result<f64> {
    Ok(usable_rows(theta, n)? as f64 * residual_norm2(theta))
}

/// Residual filter `w` and its autocorrelations `L_k = Σ_i w_i w_{i−k}`.
fn autocorrelations(theta: &MovingAverage) -> (Vec<f64>, Vec<f64>) {
    let mut w: Vec<f64> = theta.weights().iter().map(|v| -v).collect();
    w[theta.lower()] += 1.0;
    let s = w.len();
    let l = (0..s).map(|k| (k..s).map(|i| w[i] * w[i - k]).sum()).collect();
    (w, l)
}

/// `tr(Δ²) = m L₀² + 2 Σ_{k=1}^{p+f} (m−k) L_k²` with `m = n−p−f`.
pub fn trace_delta2_fast(theta: &MovingAverage, n: usize) -> Result<f64> {
    let span = theta.lower() + theta.upper();
    if n <= 2 * span {
        return invalid(format!("n={n} must exceed 2(p+f)={}", 2 * span));
    }
    let m = (n - span) as f64;
    let (_, l) = autocorrelations(theta);
    Ok(m * l[0] * l[0] + 2.0 * (1..=span).map(|k| (m - k as f64) * l[k] * l[k]).sum::<f64>())
}

/// Equivalent degrees of freedom of `σ̂²`: `tr(Δ)²/tr(Δ²)` when `exact`,
/// otherwise `tr(Δ)`.
pub fn degrees_of_freedom(theta: &MovingAverage, n: usize, exact: bool) -> Result<f64> {
    let td = trace_delta(theta, n)?;
    if !exact {
        return Ok(td);
    }
    let td2 = trace_delta2_fast(theta, n)?;
    if !(td2 > 0.0) {
        return Err(Error::DegenerateFilter("tr(Δ²) is zero".into()));
    }
    Ok(td * td / td2)
}

pub fn spectrum(theta: &MovingAverage, n: usize) -> Result<SmootherSpectrum> {
    let m = usable_rows(theta, n)? as f64;
    let (w, l) = autocorrelations(theta);
    let trace_delta = trace_delta(theta, n)?;
    let trace_delta2 = trace_delta2_fast(theta, n)?;
    Ok(SmootherSpectrum {
        w,
        l,
        trace_delta,
        trace_delta2,
        nu: trace_delta * trace_delta / trace_delta2,
        nu1: m * theta.weight(0),
        nu2: m * theta.sum_squares(),
    })
}

/// `tr(Δ)` and `tr(Δ²)` for a residual operator given row by row: row `r`
/// holds `e_t − h_t` for one fitted period.
pub fn dense_traces(residual_rows: &DMatrix<f64>) -> (f64, f64) {
    let gram = residual_rows * residual_rows.transpose();
    (gram.trace(), gram.norm_squared())
}
