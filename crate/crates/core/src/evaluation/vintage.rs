use log::warn;

use crate::error::{invalid, Result};
use crate::estimate::TrendEstimate;
use crate::series::{Period, TimeSeries};

/// Real-time estimates: one row per publication date, `NaN` where absent.
#[derive(Debug, Clone, PartialEq)]
pub struct VintageMatrix {
    pub series_start: Period,
    pub publications: Vec<Period>,
    /// `rows[v][t]`: estimate of period index `t` published at `publications[v]`.
    pub rows: Vec<Vec<f64>>,
}

impl VintageMatrix {
    pub fn period(&self, t: usize) -> Period {
        self.series_start.offset(t as i64)
    }

    pub fn index_of(&self, p: Period) -> Option<usize> {
        let k = p.months_since(self.series_start);
        (k >= 0).then_some(k as usize)
    }

    /// Estimate of `period` as published at `publication`.
    pub fn cell(&self, publication: Period, period: Period) -> Option<f64> {
        let v = self.publications.iter().position(|&p| p == publication)?;
        let t = self.index_of(period)?;
        self.rows[v].get(t).copied().filter(|x| !x.is_nan())
    }

    pub fn final_row(&self) -> &[f64] {
        self.rows.last().map(|r| r.as_slice()).unwrap_or(&[])
    }

    /// `(publication, period, estimate)` for every present cell.
    pub fn long_rows(&self) -> Vec<(Period, Period, f64)> {
        let mut out = Vec::new();
        for (v, row) in self.publications.iter().zip(&self.rows) {
            for (t, &x) in row.iter().enumerate() {
                if !x.is_nan() {
                    out.push((*v, self.period(t), x));
                }
            }
        }
        out
    }
}

/// Re-runs `estimator` on every truncation of `series` ending between
/// `start` and the last period.
pub fn vintages<F>(series: &TimeSeries, estimator: F, start: Period) -> Result<VintageMatrix>
where
    F: Fn(&TimeSeries) -> Result<TrendEstimate>,
{
    let first = series
        .index_of(start)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("vintage start {start} outside the series")))?;
    let n = series.len();
    let mut publications = Vec::with_capacity(n - first);
    let mut rows = Vec::with_capacity(n - first);
    for end in first..n {
        let v = series.period(end);
        let mut row = vec![f64::NAN; n];
        match series.truncated(end + 1).and_then(|s| estimator(&s)) {
            Ok(est) => row[..est.values.len()].copy_from_slice(&est.values),
            Err(e) => warn!("vintage {v}: {e}"),
        }
        publications.push(v);
        rows.push(row);
    }
    if publications.is_empty() {
        return invalid("no vintage to compute");
    }
    Ok(VintageMatrix { series_start: series.start(), publications, rows })
}

/// Revisions `estimate_{t+q}(t) − estimate_final(t)` for `q = 0..=horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevisionMetrics {
    /// `(period, revisions by q)`; `None` where the vintage is not available.
    pub per_period: Vec<(Period, Vec<Option<f64>>)>,
    pub mean_abs: f64,
    pub max_abs: f64,
}

pub fn revision_metrics(vm: &VintageMatrix, horizon: usize) -> RevisionMetrics {
    let last = vm.final_row();
    let mut per_period = Vec::new();
    let mut all = Vec::new();
    for &p in &vm.publications {
        let t = vm.index_of(p).unwrap();
        let fin = last[t];
        let revs: Vec<Option<f64>> = (0..=horizon)
            .map(|q| {
                let v = vm.cell(p.offset(q as i64), p)?;
                (!fin.is_nan()).then(|| v - fin)
            })
            .collect();
        all.extend(revs.iter().flatten().map(|r| r.abs()));
        per_period.push((p, revs));
    }
    let mean_abs = if all.is_empty() { 0.0 } else { all.iter().sum::<f64>() / all.len() as f64 };
    let max_abs = all.iter().cloned().fold(0.0, f64::max);
    RevisionMetrics { per_period, mean_abs, max_abs }
}
