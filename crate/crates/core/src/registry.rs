//! Trend smoothers behind a common trait, looked up by name.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::debug;

use crate::error::{Error, Result};
use crate::estimate::TrendEstimate;
use crate::filters::{
    apply_filter_set, clf_filter_set, cut_normalize_filter_set, default_icr_for_length,
    henderson_filter, icr, musgrave_filter_set, select_henderson_length, ClfTable, FilterSet,
};
use crate::inference::{confint_robust, confint_uniform, IntervalOptions, IntervalSeries};
use crate::nonlinear::{robust_smooth, Boundary, Method};
use crate::robust_ma::{OutlierSpec, RobustMa};
use crate::series::TimeSeries;

/// Half-width of the trend filter, fixed or chosen from the I-C ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfWidth {
    Fixed(usize),
    Auto,
}

impl Default for HalfWidth {
    fn default() -> Self {
        HalfWidth::Fixed(6)
    }
}

impl FromStr for HalfWidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(HalfWidth::Auto);
        }
        match s.parse::<usize>() {
            Ok(h) if h >= 1 => Ok(HalfWidth::Fixed(h)),
            _ => Err(Error::InvalidArgument(format!("half-width must be a positive integer or 'auto', got '{s}'"))),
        }
    }
}

impl fmt::Display for HalfWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HalfWidth::Fixed(h) => write!(f, "{h}"),
            HalfWidth::Auto => f.write_str("auto"),
        }
    }
}

/// Everything a smoother may be configured with; each strategy reads what it needs.
#[derive(Debug, Clone, Default)]
pub struct SmootherConfig {
    pub h: HalfWidth,
    /// I-C ratio for the end-point slope; defaults by half-width.
    pub ratio: Option<f64>,
    pub outliers: Vec<OutlierSpec>,
    /// Local degree for the robust window estimators.
    pub degree: Option<usize>,
    pub boundary: Boundary,
    pub clf_table: Option<ClfTable>,
}

impl SmootherConfig {
    /// Half-width and I-C ratio for `series`. With `Auto`, the ratio measured
    /// with a 13-term Henderson filter picks the length, and the length's
    /// conventional ratio is used for the end points unless overridden.
    pub fn resolve(&self, series: Option<&TimeSeries>) -> Result<(usize, f64)> {
        let h = match self.h {
            HalfWidth::Fixed(h) => h,
            HalfWidth::Auto => {
                let s = series.ok_or_else(|| {
                    Error::InvalidArgument("automatic length selection needs a series".into())
                })?;
                let r = icr(s, &henderson_filter(6)?)?;
                let h = select_henderson_length(r);
                debug!("I-C ratio {r:.4} selects h={h}");
                h
            }
        };
        Ok((h, self.ratio.unwrap_or_else(|| default_icr_for_length(h))))
    }
}

pub trait TrendSmoother: Send + Sync {
    fn name(&self) -> &str;

    fn smooth(&self, series: &TimeSeries) -> Result<TrendEstimate>;

    /// Confidence intervals, for smoothers that are linear in the data.
    fn intervals(&self, _series: &TimeSeries, _opts: &IntervalOptions) -> Result<Option<IntervalSeries>> {
        Ok(None)
    }

    /// Linear filter set, when the smoother has one independent of outliers.
    fn filter_set(&self, _series: Option<&TimeSeries>) -> Result<Option<FilterSet>> {
        Ok(None)
    }
}

/// Henderson with Musgrave end points; robust moving average when outliers are given.
struct Henderson {
    config: SmootherConfig,
}

impl Henderson {
    /// Outliers falling inside `series`; others are ignored for this run.
    fn specs_in(&self, series: &TimeSeries) -> Vec<OutlierSpec> {
        self.config
            .outliers
            .iter()
            .filter(|s| {
                let inside = s.date >= series.start() && s.date <= series.end();
                if !inside {
                    debug!("{s} outside {}..{}, ignored", series.start(), series.end());
                }
                inside
            })
            .copied()
            .collect()
    }
}

impl TrendSmoother for Henderson {
    fn name(&self) -> &str {
        "henderson"
    }

    fn smooth(&self, series: &TimeSeries) -> Result<TrendEstimate> {
        let (h, r) = self.config.resolve(Some(series))?;
        let specs = self.specs_in(series);
        if specs.is_empty() {
            apply_filter_set(series, &musgrave_filter_set(h, r)?)
        } else {
            Ok(RobustMa::new(h, r)?.apply(series, &specs)?.0)
        }
    }

    fn intervals(&self, series: &TimeSeries, opts: &IntervalOptions) -> Result<Option<IntervalSeries>> {
        let (h, r) = self.config.resolve(Some(series))?;
        let specs = self.specs_in(series);
        let rows = if specs.is_empty() {
            confint_uniform(series, &musgrave_filter_set(h, r)?, opts)?
        } else {
            let (_, plan) = RobustMa::new(h, r)?.apply(series, &specs)?;
            confint_robust(series, &plan, opts)?
        };
        Ok(Some(rows))
    }

    fn filter_set(&self, series: Option<&TimeSeries>) -> Result<Option<FilterSet>> {
        let (h, r) = self.config.resolve(series)?;
        Ok(Some(musgrave_filter_set(h, r)?))
    }
}

/// A fixed linear filter set.
struct Linear {
    name: &'static str,
    build: fn(&SmootherConfig, Option<&TimeSeries>) -> Result<FilterSet>,
    config: SmootherConfig,
}

impl TrendSmoother for Linear {
    fn name(&self) -> &str {
        self.name
    }

    fn smooth(&self, series: &TimeSeries) -> Result<TrendEstimate> {
        apply_filter_set(series, &(self.build)(&self.config, Some(series))?)
    }

    fn intervals(&self, series: &TimeSeries, opts: &IntervalOptions) -> Result<Option<IntervalSeries>> {
        Ok(Some(confint_uniform(series, &(self.build)(&self.config, Some(series))?, opts)?))
    }

    fn filter_set(&self, series: Option<&TimeSeries>) -> Result<Option<FilterSet>> {
        Ok(Some((self.build)(&self.config, series)?))
    }
}

fn clf_set(config: &SmootherConfig, _: Option<&TimeSeries>) -> Result<FilterSet> {
    let table = config
        .clf_table
        .as_ref()
        .ok_or_else(|| Error::Config("the clf method needs a coefficient table".into()))?;
    clf_filter_set(table)
}

fn cut_normalize_set(config: &SmootherConfig, series: Option<&TimeSeries>) -> Result<FilterSet> {
    let (h, _) = config.resolve(series)?;
    cut_normalize_filter_set(format!("cut_normalize_h{h}"), henderson_filter(h)?)
}

/// One of the robust window regressions.
struct Window {
    method: Method,
    config: SmootherConfig,
}

impl TrendSmoother for Window {
    fn name(&self) -> &str {
        self.method.as_str()
    }

    fn smooth(&self, series: &TimeSeries) -> Result<TrendEstimate> {
        let (h, _) = self.config.resolve(Some(series))?;
        let degree = self.config.degree.unwrap_or(if self.method == Method::Med { 0 } else { 1 });
        robust_smooth(series, self.method, h, degree, self.config.boundary)
    }
}

pub type Factory = fn(&SmootherConfig) -> Result<Box<dyn TrendSmoother>>;

/// Name → constructor table.
pub struct Registry {
    factories: BTreeMap<String, Factory>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { factories: BTreeMap::new() }
    }

    pub fn register(&mut self, name: &str, factory: Factory) {
        self.factories.insert(name.to_ascii_lowercase(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(|s| s.as_str())
    }

    pub fn build(&self, name: &str, config: &SmootherConfig) -> Result<Box<dyn TrendSmoother>> {
        let factory = self.factories.get(&name.trim().to_ascii_lowercase()).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown method '{name}' (available: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        factory(config)
    }
}

fn window_factory(method: Method, config: &SmootherConfig) -> Result<Box<dyn TrendSmoother>> {
    let degree = config.degree.unwrap_or(if method == Method::Med { 0 } else { 1 });
    if !method.supports_degree(degree) {
        return Err(Error::InvalidArgument(format!("method {method} does not support degree {degree}")));
    }
    if !config.outliers.is_empty() {
        return Err(Error::InvalidArgument(format!("method {method} does not take outlier regressors")));
    }
    Ok(Box::new(Window { method, config: config.clone() }))
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register("henderson", |c| Ok(Box::new(Henderson { config: c.clone() })));
        r.register("clf", |c| {
            Ok(Box::new(Linear { name: "clf", build: clf_set, config: c.clone() }))
        });
        r.register("cut-normalize", |c| {
            Ok(Box::new(Linear { name: "cut-normalize", build: cut_normalize_set, config: c.clone() }))
        });
        r.register("med", |c| window_factory(Method::Med, c));
        r.register("rm", |c| window_factory(Method::Rm, c));
        r.register("lms", |c| window_factory(Method::Lms, c));
        r.register("lts", |c| window_factory(Method::Lts, c));
        r.register("lqd", |c| window_factory(Method::Lqd, c));
        r.register("dr", |c| window_factory(Method::Dr, c));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Period;

    fn ts(n: usize) -> TimeSeries {
        let y = (0..n).map(|t| 100.0 + (t as f64 * 0.5).sin()).collect();
        TimeSeries::new(Period::new(2018, 1).unwrap(), y).unwrap()
    }

    #[test]
    fn every_name_builds_and_runs() {
        let reg = Registry::default();
        let names: Vec<String> = reg.names().map(String::from).collect();
        assert_eq!(names.len(), 9);
        for name in names {
            let cfg = SmootherConfig {
                clf_table: Some(ClfTable {
                    provenance: "test".into(),
                    weights: henderson_filter(6).unwrap().weights().to_vec(),
                }),
                ..Default::default()
            };
            let s = reg.build(&name, &cfg).unwrap();
            assert_eq!(s.name(), name);
            assert_eq!(s.smooth(&ts(40)).unwrap().len(), 40);
        }
        assert!(reg.build("nope", &SmootherConfig::default()).is_err());
    }

    #[test]
    fn clf_with_henderson_table_equals_cut_normalize() {
        let reg = Registry::default();
        let cfg = SmootherConfig {
            clf_table: Some(ClfTable {
                provenance: "test".into(),
                weights: henderson_filter(6).unwrap().weights().to_vec(),
            }),
            ..Default::default()
        };
        let a = reg.build("clf", &cfg).unwrap().smooth(&ts(40)).unwrap();
        let b = reg.build("cut-normalize", &cfg).unwrap().smooth(&ts(40)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn auto_length_and_validation() {
        let cfg = SmootherConfig { h: HalfWidth::Auto, ..Default::default() };
        let lin: Vec<f64> = (0..60).map(|t| t as f64 + if t % 2 == 0 { 0.01 } else { -0.01 }).collect();
        let s = TimeSeries::new(Period::new(2018, 1).unwrap(), lin).unwrap();
        assert_eq!(cfg.resolve(Some(&s)).unwrap(), (4, 1.0));
        assert!(cfg.resolve(None).is_err());
        assert_eq!("auto".parse::<HalfWidth>().unwrap(), HalfWidth::Auto);
        assert!("0".parse::<HalfWidth>().is_err());
        let reg = Registry::default();
        let bad = SmootherConfig { degree: Some(2), ..Default::default() };
        assert!(reg.build("lqd", &bad).is_err());
        assert!(reg.build("lts", &bad).is_ok());
    }

    #[test]
    fn henderson_goes_robust_with_outliers() {
        let reg = Registry::default();
        let s = ts(40);
        let spec: OutlierSpec = "ao:2019-06".parse().unwrap();
        let far: OutlierSpec = "ls:2030-01".parse().unwrap();
        let cfg = SmootherConfig { outliers: vec![spec, far], ..Default::default() };
        let est = reg.build("henderson", &cfg).unwrap().smooth(&s).unwrap();
        assert!(est.sources.iter().any(|s| *s == crate::Source::RobustSymmetric));
    }
}
