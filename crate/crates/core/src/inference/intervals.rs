use std::collections::HashMap;

use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use super::spectrum::{degrees_of_freedom, dense_traces, sigma2_hat, Sigma2Form};
use crate::error::{invalid, Error, Result};
use crate::estimate::Source;
use crate::filters::{apply_filter_set, FilterSet, MovingAverage};
use crate::robust_ma::RobustFilterPlan;
use crate::series::{Period, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRow {
    pub period: Period,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub df: f64,
    pub sigma2: f64,
    pub filter_id: String,
}

impl IntervalRow {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

pub type IntervalSeries = Vec<IntervalRow>;

/// Options shared by the interval builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalOptions {
    pub alpha: f64,
    /// Exact `tr(Δ)²/tr(Δ²)` degrees of freedom rather than `tr(Δ)`.
    pub exact_df: bool,
    pub sigma2_form: Sigma2Form,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions { alpha: 0.05, exact_df: true, sigma2_form: Sigma2Form::TraceDelta }
    }
}

/// `|t_{ν, α/2}|`.
pub fn student_quantile(df: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    if df > 1e7 {
        return Ok(Normal::standard().inverse_cdf(1.0 - alpha / 2.0));
    }
    let t = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::DegenerateFilter(format!("Student distribution with {df} df: {e}")))?;
    Ok(t.inverse_cdf(1.0 - alpha / 2.0))
}

fn row(period: Period, estimate: f64, sigma2: f64, df: f64, theta: &MovingAverage, alpha: f64, id: String) -> Result<IntervalRow> {
    let half = student_quantile(df, alpha)? * sigma2.sqrt() * theta.sum_squares().sqrt();
    Ok(IntervalRow { period, estimate, lower: estimate - half, upper: estimate + half, df, sigma2, filter_id: id })
}

/// Variance and degrees of freedom of a filter applied uniformly over the
/// whole series.
fn uniform_moments(series: &TimeSeries, theta: &MovingAverage, opts: &IntervalOptions) -> Result<(f64, f64)> {
    let s2 = sigma2_hat(series, theta, opts.sigma2_form)?;
    let df = degrees_of_freedom(theta, series.len(), opts.exact_df)?;
    Ok((s2, df))
}

/// Intervals for a linear filter set. Each member gets the variance and
/// degrees of freedom of its own uniform application over the sample.
pub fn confint_uniform(series: &TimeSeries, fs: &FilterSet, opts: &IntervalOptions) -> Result<IntervalSeries> {
    let est = apply_filter_set(series, fs)?;
    let n = series.len();
    let mut cache: HashMap<Source, (f64, f64)> = HashMap::new();
    (0..n)
        .map(|t| {
            let (theta, src) = fs.member_for(t, n);
            let (s2, df) = match cache.get(&src) {
                Some(v) => *v,
                None => {
                    let v = uniform_moments(series, &theta, opts)?;
                    cache.insert(src, v);
                    v
                }
            };
            row(series.period(t), est.values[t], s2, df, &theta, opts.alpha, src.to_string())
        })
        .collect()
}

/// Variance and degrees of freedom from the dense hat matrix of `rows`,
/// each row being `(index, filter)` applied at that index.
fn dense_moments<'a>(
    y: &[f64],
    rows: impl ExactSizeIterator<Item = (usize, &'a MovingAverage)>,
    exact_df: bool,
) -> Result<(f64, f64)> {
    let n = y.len();
    let mut r = DMatrix::<f64>::zeros(rows.len(), n);
    let mut rss = 0.0;
    for (k, (t, f)) in rows.enumerate() {
        r[(k, t)] += 1.0;
        for (j, w) in f.iter() {
            r[(k, (t as isize + j) as usize)] -= w;
        }
        rss += (y[t] - f.apply_at(y, t).expect("row filter fits the series")).powi(2);
    }
    let (td, td2) = dense_traces(&r);
    if !(td > 0.0 && td2 > 0.0) {
        return Err(Error::DegenerateFilter(format!("hat matrix traces tr(Δ)={td}, tr(Δ²)={td2}")));
    }
    Ok((rss / td, if exact_df { td * td / td2 } else { td }))
}

/// Intervals for a plan whose filters vary with the period.
///
/// Centred periods share the variance of the dense hat matrix built from
/// the plan's own centred filters. An end-point period with horizon `q`
/// uses a fictive hat matrix in which every row is the end-point filter of
/// horizon `q` that would be built at that row's date, robust where the
/// construction succeeds and linear where it falls back.
pub fn confint_robust(series: &TimeSeries, plan: &RobustFilterPlan, opts: &IntervalOptions) -> Result<IntervalSeries> {
    series.require_complete()?;
    let y = series.values();
    let n = y.len();
    if plan.entries.len() != n {
        return invalid(format!("plan covers {} periods, series has {n}", plan.entries.len()));
    }
    let h = plan.h;
    let centre = dense_moments(y, (h..n - h).map(|t| (t, &plan.entries[t].filter)), opts.exact_df)?;

    let mut cache: HashMap<(bool, usize), (f64, f64)> = HashMap::new();
    plan.entries
        .iter()
        .enumerate()
        .map(|(t, e)| {
            let estimate = e.filter.apply_at(y, t).expect("plan filter fits the series");
            let (s2, df) = match e.source.horizon() {
                None => centre,
                Some(q) => {
                    let key = (t < h, q);
                    match cache.get(&key) {
                        Some(v) => *v,
                        None => {
                            let rows = plan.fictive_rows(q, key.0)?;
                            let v = dense_moments(y, rows.iter().map(|(i, f, _)| (*i, f)), opts.exact_df)?;
                            cache.insert(key, v);
                            v
                        }
                    }
                }
            };
            row(e.period, estimate, s2, df, &e.filter, opts.alpha, e.source.to_string())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::musgrave_filter_set;
    use crate::robust_ma::{OutlierKind, OutlierSpec, RobustMa};

    fn noisy(n: usize) -> TimeSeries {
        let y = (0..n)
            .map(|t| 50.0 + 0.2 * t as f64 + ((t * 37 % 17) as f64 - 8.0) * 0.3)
            .collect();
        TimeSeries::new(Period::new(2015, 1).unwrap(), y).unwrap()
    }

    #[test]
    fn noiseless_intervals_have_zero_width() {
        let y = (0..60).map(|t| 3.0 + 0.5 * t as f64).collect();
        let s = TimeSeries::new(Period::new(2015, 1).unwrap(), y).unwrap();
        let fs = musgrave_filter_set(6, 3.5).unwrap();
        let rows = confint_uniform(&s, &fs, &IntervalOptions::default()).unwrap();
        for r in &rows[6..54] {
            assert!(r.half_width() < 1e-9);
        }
    }

    #[test]
    fn half_width_formula() {
        let s = noisy(80);
        let fs = musgrave_filter_set(6, 3.5).unwrap();
        let rows = confint_uniform(&s, &fs, &IntervalOptions::default()).unwrap();
        let r = &rows[40];
        let q = student_quantile(r.df, 0.05).unwrap();
        let want = q * r.sigma2.sqrt() * fs.symmetric().sum_squares().sqrt();
        assert!((r.half_width() - want).abs() < 1e-12);
        assert!(r.lower <= r.estimate && r.estimate <= r.upper);
    }

    #[test]
    fn larger_alpha_shrinks_intervals() {
        let s = noisy(80);
        let fs = musgrave_filter_set(6, 3.5).unwrap();
        let mut prev: Option<IntervalSeries> = None;
        for alpha in [0.01, 0.05, 0.1, 0.2] {
            let opts = IntervalOptions { alpha, ..Default::default() };
            let rows = confint_uniform(&s, &fs, &opts).unwrap();
            if let Some(p) = &prev {
                for (a, b) in rows.iter().zip(p) {
                    assert!(a.half_width() < b.half_width());
                }
            }
            prev = Some(rows);
        }
    }

    #[test]
    fn empty_plan_matches_uniform() {
        let s = noisy(80);
        let rma = RobustMa::new(6, 3.5).unwrap();
        let (_, plan) = rma.apply(&s, &[]).unwrap();
        let opts = IntervalOptions::default();
        let a = confint_robust(&s, &plan, &opts).unwrap();
        let b = confint_uniform(&s, rma.linear(), &opts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.lower - y.lower).abs() < 1e-9 && (x.upper - y.upper).abs() < 1e-9);
            assert!((x.df - y.df).abs() < 1e-8 * y.df);
            assert_eq!(x.filter_id, y.filter_id);
        }
    }

    #[test]
    fn fallback_rows_are_linear() {
        let mut y = noisy(60).values().to_vec();
        for (k, t) in (20..27).enumerate() {
            y[t] += if k % 2 == 0 { 8.0 } else { -6.0 };
        }
        let s = TimeSeries::new(Period::new(2015, 1).unwrap(), y).unwrap();
        let specs: Vec<OutlierSpec> =
            (20..27).map(|t| OutlierSpec::new(OutlierKind::Ao, s.period(t))).collect();
        let rma = RobustMa::new(6, 3.5).unwrap();
        let (_, plan) = rma.apply(&s, &specs).unwrap();
        let rows = plan.fictive_rows(0, false).unwrap();
        let fallback: Vec<_> = rows.iter().filter(|(_, _, src)| src.is_fallback()).collect();
        assert!(!fallback.is_empty());
        for (_, f, _) in fallback {
            assert_eq!(f, rma.linear().asymmetric(0));
        }
        let rows = confint_robust(&s, &plan, &IntervalOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.lower <= r.estimate && r.estimate <= r.upper));
    }

    #[test]
    fn bad_alpha() {
        assert!(student_quantile(10.0, 0.0).is_err());
        assert!(student_quantile(10.0, 1.0).is_err());
        assert!((student_quantile(1e9, 0.05).unwrap() - 1.959964).abs() < 1e-5);
    }
}
