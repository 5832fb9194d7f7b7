use log::{debug, warn};
use nalgebra::{DMatrix, DVector};

use super::{check_unique, OutlierKind, OutlierSpec};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Source, TrendEstimate};
use crate::filters::{
    default_icr_for_length, henderson_filter, henderson_kernel, local_poly_filter,
    mmsre_filter_set, revision_filter, slope_ratio_for_icr, wls_weights, FilterSet,
    MovingAverage,
};
use crate::linalg;
use crate::series::{Period, TimeSeries};

const SPAN_TOL: f64 = 1e-9;

/// One outlier column over the window offsets `-h..=h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressor {
    pub spec: OutlierSpec,
    pub column: Vec<f64>,
}

impl Regressor {
    fn value_at_centre(&self) -> f64 {
        self.column[self.column.len() / 2]
    }
}

/// Regressor columns of the specs that touch the window centred on `t`.
pub fn regressor_columns(specs: &[OutlierSpec], t: Period, h: usize) -> Vec<Regressor> {
    let hi = h as i64;
    let mut out = Vec::new();
    for spec in specs {
        let lag = t.months_since(spec.date);
        let at_t0 = |j: i64| if lag + j == 0 { 1.0 } else { 0.0 };
        let column: Vec<f64> = match spec.kind {
            OutlierKind::Ao => (-hi..=hi).map(at_t0).collect(),
            OutlierKind::Ls => (-hi..=hi).map(|j| if lag + j >= 0 { 1.0 } else { 0.0 }).collect(),
            OutlierKind::AoTrend => {
                if lag < 0 || lag == hi {
                    (-hi..=hi).map(at_t0).collect()
                } else if lag < hi {
                    (-hi..=hi).map(|j| 1.0 - at_t0(j)).collect()
                } else {
                    continue;
                }
            }
        };
        if column.iter().any(|&v| v != 0.0) {
            out.push(Regressor { spec: *spec, column });
        }
    }
    out
}

/// Drops columns already spanned by `x` or repeating an earlier column,
/// then checks that the augmented design has full rank.
fn active_regressors(x: &DMatrix<f64>, regs: Vec<Regressor>, t: Period) -> Result<Vec<Regressor>> {
    let mut kept: Vec<Regressor> = Vec::new();
    for r in regs {
        let col = DVector::from_column_slice(&r.column);
        if linalg::projection_residual(x, &col).norm() <= SPAN_TOL * col.norm() {
            // A constant column only means the shock lies outside the window.
            let constant = r.column.iter().all(|&v| v == r.column[0]);
            if constant {
                debug!("{} at {t}: regressor constant over the window, ignored", r.spec);
                continue;
            }
            warn!("{} at {t}: regressor is spanned by the trend polynomial, ignored", r.spec);
            continue;
        }
        if kept.iter().any(|k| k.column == r.column) {
            warn!("{} at {t}: regressor duplicates another column, ignored", r.spec);
            continue;
        }
        kept.push(r);
    }
    if !kept.is_empty() && linalg::rank(&augment(x, &kept)) < x.ncols() + kept.len() {
        return Err(Error::TooManyOutliers { period: t.to_string() });
    }
    Ok(kept)
}

fn augment(x: &DMatrix<f64>, regs: &[Regressor]) -> DMatrix<f64> {
    let mut w = x.clone().resize_horizontally(x.ncols() + regs.len(), 0.0);
    for (k, r) in regs.iter().enumerate() {
        w.set_column(x.ncols() + k, &DVector::from_column_slice(&r.column));
    }
    w
}

fn design(h: usize, degree: usize) -> DMatrix<f64> {
    let hi = h as isize;
    linalg::poly_design(&linalg::positions(-hi, hi), degree)
}

/// Centred filter from the local polynomial augmented with `regs`.
///
/// The estimate is the fitted trend-cycle at the centre, so regressors
/// assigned to the trend contribute their centre value.
fn augmented_filter(h: usize, degree: usize, kernel: &[f64], regs: &[Regressor]) -> Result<MovingAverage> {
    if regs.is_empty() {
        return local_poly_filter(h, degree, kernel);
    }
    let w = augment(&design(h, degree), regs);
    let mut target = DVector::zeros(w.ncols());
    target[0] = 1.0;
    for (k, r) in regs.iter().enumerate() {
        if r.spec.kind.in_trend() {
            target[degree + 1 + k] = r.value_at_centre();
        }
    }
    let weights = wls_weights(&w, kernel, &target)
        .ok_or_else(|| Error::NumericalRank(format!("augmented design singular for h={h}")))?;
    MovingAverage::new(h, h, weights)
}

/// Centred robust filter at `t` and the regressors it models.
pub fn robust_symmetric_filter(
    h: usize,
    degree: usize,
    kernel: &[f64],
    specs: &[OutlierSpec],
    t: Period,
) -> Result<(MovingAverage, Vec<Regressor>)> {
    let regs = active_regressors(&design(h, degree), regressor_columns(specs, t, h), t)?;
    Ok((augmented_filter(h, degree, kernel, &regs)?, regs))
}

/// Trailing robust member with `q` future points: minimises the revision
/// to `sym_r` under the Musgrave bias penalty, preserving constants and
/// the response to every regressor in `regs`.
///
/// Returns `None` when the observed constraints are rank deficient.
pub fn robust_asym_filter(
    sym_r: &MovingAverage,
    slope_ratio: f64,
    q: usize,
    regs: &[Regressor],
) -> Option<MovingAverage> {
    let h = sym_r.lower();
    let m = h + q + 1;
    let c = augment(&DMatrix::from_element(2 * h + 1, 1, 1.0), regs);
    if linalg::rank(&c.rows(0, m).into_owned()) < c.ncols() {
        return None;
    }
    let hi = h as isize;
    let bias = (slope_ratio > 0.0)
        .then(|| DVector::from_iterator(2 * h + 1, (-hi..=hi).map(|j| slope_ratio * j as f64)));
    let v = revision_filter(sym_r, q, &c, bias.as_ref())?;
    MovingAverage::new(h, q, v).ok()
}

/// Per-period filters of a robust run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry {
    pub period: Period,
    /// Weights relative to `period`.
    pub filter: MovingAverage,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct RobustFilterPlan {
    pub h: usize,
    pub entries: Vec<PlanEntry>,
    model: RobustMa,
    specs: Vec<OutlierSpec>,
}

impl RobustFilterPlan {
    pub fn fallback_count(&self) -> usize {
        self.entries.iter().filter(|e| e.source.is_fallback()).count()
    }

    pub fn specs(&self) -> &[OutlierSpec] {
        &self.specs
    }

    /// Rows of the hat matrix that would arise if every period were estimated
    /// with an end-point filter of horizon `q`: `(index, filter, source)` for
    /// each index where such a filter fits inside the sample.
    pub fn fictive_rows(&self, q: usize, leading: bool) -> Result<Vec<(usize, MovingAverage, Source)>> {
        let h = self.h;
        let n = self.entries.len();
        let start = self.entries[0].period;
        let (lo, hi) = if leading { (q, n - 1 - h) } else { (h, n - 1 - q) };
        (lo..=hi)
            .map(|t| {
                let period = start.offset(t as i64);
                let (f, src) = if leading {
                    self.model.member(period, q, 2 * h + 1, &self.specs)?
                } else {
                    self.model.member(period, t, t + q + 1, &self.specs)?
                };
                Ok((t, f, src))
            })
            .collect()
    }
}

/// Robust moving-average smoother: Henderson-type centred filters and
/// Musgrave-type end points, both augmented with outlier regressors.
#[derive(Debug, Clone)]
pub struct RobustMa {
    degree: usize,
    kernel: Vec<f64>,
    slope_ratio: f64,
    linear: FilterSet,
}

impl RobustMa {
    /// Half-width `h`, I-C ratio `r` for the end-point slope, local degree 3.
    pub fn new(h: usize, r: f64) -> Result<RobustMa> {
        RobustMa::with_degree(h, r, 3)
    }

    pub fn with_default_ratio(h: usize) -> Result<RobustMa> {
        RobustMa::new(h, default_icr_for_length(h))
    }

    /// `degree` is 2 or 3; both give the Henderson filter without outliers.
    pub fn with_degree(h: usize, r: f64, degree: usize) -> Result<RobustMa> {
        if !(2..=3).contains(&degree) {
            return invalid(format!("robust moving average needs degree 2 or 3, got {degree}"));
        }
        let slope_ratio = slope_ratio_for_icr(r)?;
        let linear =
            mmsre_filter_set(format!("musgrave_h{h}"), henderson_filter(h)?, 1, 0, slope_ratio)?;
        Ok(RobustMa { degree, kernel: henderson_kernel(h)?, slope_ratio, linear })
    }

    pub fn h(&self) -> usize {
        self.linear.h()
    }

    /// The Henderson/Musgrave set used wherever no outlier is modelled.
    pub fn linear(&self) -> &FilterSet {
        &self.linear
    }

    /// Builds the filter for every period of a series starting at `start`
    /// with `n` observations.
    pub fn plan(&self, start: Period, n: usize, specs: &[OutlierSpec]) -> Result<RobustFilterPlan> {
        let h = self.h();
        if n < 2 * h + 1 {
            return invalid(format!("series of length {n} is shorter than the {}-term filter", 2 * h + 1));
        }
        check_unique(specs)?;
        let end = start.offset(n as i64 - 1);
        if let Some(s) = specs.iter().find(|s| s.date < start || s.date > end) {
            return invalid(format!("outlier {s} lies outside the series {start}..{end}"));
        }
        let entries = (0..n)
            .map(|t| {
                let period = start.offset(t as i64);
                let (filter, source) = self.member(period, t, n, specs)?;
                Ok(PlanEntry { period, filter, source })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RobustFilterPlan { h, entries, model: self.clone(), specs: specs.to_vec() })
    }

    /// Filter for index `t` of an `n`-long series whose index `t` is `period`.
    pub(crate) fn member(&self, period: Period, t: usize, n: usize, specs: &[OutlierSpec]) -> Result<(MovingAverage, Source)> {
        let h = self.h();
        let (linear, linear_source) = self.linear.member_for(t, n);
        let raw = regressor_columns(specs, period, h);
        if raw.is_empty() {
            return Ok((linear, linear_source));
        }
        let x = design(h, self.degree);
        if linear_source == Source::Symmetric {
            let regs = active_regressors(&x, raw, period)?;
            if regs.is_empty() {
                return Ok((linear, linear_source));
            }
            return Ok((augmented_filter(h, self.degree, &self.kernel, &regs)?, Source::RobustSymmetric));
        }

        let leading = matches!(linear_source, Source::Leading { .. });
        let q = linear_source.horizon().expect("end-point member");
        let fallback = if leading { Source::FallbackLeading { q } } else { Source::FallbackTrailing { q } };
        let observed = if leading { h - q..2 * h + 1 } else { 0..h + q + 1 };
        let raw: Vec<Regressor> = raw
            .into_iter()
            .filter(|r| r.column[observed.clone()].iter().any(|&v| v != 0.0))
            .collect();
        let regs = match active_regressors(&x, raw, period) {
            Ok(r) => r,
            Err(Error::TooManyOutliers { .. }) => {
                warn!("{period}: augmented design rank deficient, using the linear end-point filter");
                return Ok((linear, fallback));
            }
            Err(e) => return Err(e),
        };
        if regs.is_empty() {
            return Ok((linear, linear_source));
        }
        let sym_r = augmented_filter(h, self.degree, &self.kernel, &regs)?;
        let built = if leading {
            let flipped: Vec<Regressor> = regs
                .iter()
                .map(|r| Regressor { spec: r.spec, column: r.column.iter().rev().cloned().collect() })
                .collect();
            robust_asym_filter(&sym_r.reversed(), self.slope_ratio, q, &flipped).map(|v| v.reversed())
        } else {
            robust_asym_filter(&sym_r, self.slope_ratio, q, &regs)
        };
        Ok(match built {
            Some(v) if leading => (v, Source::RobustLeading { q }),
            Some(v) => (v, Source::RobustTrailing { q }),
            None => {
                warn!("{period}: robust end-point constraints rank deficient, using the linear filter");
                (linear, fallback)
            }
        })
    }

    pub fn apply(&self, series: &TimeSeries, specs: &[OutlierSpec]) -> Result<(TrendEstimate, RobustFilterPlan)> {
        series.require_complete()?;
        let plan = self.plan(series.start(), series.len(), specs)?;
        let y = series.values();
        let values = plan
            .entries
            .iter()
            .enumerate()
            .map(|(t, e)| e.filter.apply_at(y, t).expect("plan filter fits the series"))
            .collect();
        let sources = plan.entries.iter().map(|e| e.source).collect();
        Ok((TrendEstimate::new(series.start(), values, sources), plan))
    }
}

/// Robust moving average of half-width `h` with end-point slope from `r`.
pub fn robust_apply(
    series: &TimeSeries,
    specs: &[OutlierSpec],
    h: usize,
    r: f64,
) -> Result<(TrendEstimate, RobustFilterPlan)> {
    RobustMa::new(h, r)?.apply(series, specs)
}
