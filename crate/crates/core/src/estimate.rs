//! Per-period trend-cycle estimates and the filter that produced each one.

use std::fmt;

use crate::series::{Period, TimeSeries};

/// Which filter (or window rule) produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// Centred symmetric filter.
    Symmetric,
    /// End-of-series asymmetric filter with `q` future observations.
    Trailing { q: usize },
    /// Start-of-series filter: the time-reversed asymmetric member `q`.
    Leading { q: usize },
    /// Centred filter augmented with outlier regressors.
    RobustSymmetric,
    RobustTrailing { q: usize },
    RobustLeading { q: usize },
    /// Robust asymmetric construction was infeasible; the linear member was used.
    FallbackTrailing { q: usize },
    FallbackLeading { q: usize },
    /// Nonlinear estimator on a full window.
    Window,
    /// Nonlinear estimator on a boundary sub-window of `size` observations.
    SubWindow { size: usize },
    /// Linear extension of the last full-window fit, `steps` periods ahead.
    Extrapolated { steps: usize },
    /// No estimate could be produced.
    Missing,
}

impl Source {
    /// Future horizon of an asymmetric member, if any.
    pub fn horizon(&self) -> Option<usize> {
        match *self {
            Source::Trailing { q }
            | Source::Leading { q }
            | Source::RobustTrailing { q }
            | Source::RobustLeading { q }
            | Source::FallbackTrailing { q }
            | Source::FallbackLeading { q } => Some(q),
            _ => None,
        }
    }

    pub fn is_fallback(&self) -> bool {
        matches!(self, Source::FallbackTrailing { .. } | Source::FallbackLeading { .. })
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, Source::Symmetric | Source::RobustSymmetric | Source::Window)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Source::Symmetric => write!(f, "sym"),
            Source::Trailing { q } => write!(f, "asym_q{q}"),
            Source::Leading { q } => write!(f, "mirror_q{q}"),
            Source::RobustSymmetric => write!(f, "robust_sym"),
            Source::RobustTrailing { q } => write!(f, "robust_asym_q{q}"),
            Source::RobustLeading { q } => write!(f, "robust_mirror_q{q}"),
            Source::FallbackTrailing { q } => write!(f, "fallback_asym_q{q}"),
            Source::FallbackLeading { q } => write!(f, "fallback_mirror_q{q}"),
            Source::Window => write!(f, "window"),
            Source::SubWindow { size } => write!(f, "subwindow_{size}"),
            Source::Extrapolated { steps } => write!(f, "extrapolated_{steps}"),
            Source::Missing => write!(f, "missing"),
        }
    }
}

/// Trend-cycle estimates aligned with the input series.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendEstimate {
    pub start: Period,
    /// `NaN` where no estimate exists.
    pub values: Vec<f64>,
    pub sources: Vec<Source>,
}

impl TrendEstimate {
    pub fn new(start: Period, values: Vec<f64>, sources: Vec<Source>) -> Self {
        debug_assert_eq!(values.len(), sources.len());
        TrendEstimate { start, values, sources }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period(&self, index: usize) -> Period {
        self.start.offset(index as i64)
    }

    /// Convert into a series (e.g. for back-transforming or re-smoothing).
    pub fn to_series(&self) -> crate::Result<TimeSeries> {
        TimeSeries::new(self.start, self.values.clone())
    }
}
