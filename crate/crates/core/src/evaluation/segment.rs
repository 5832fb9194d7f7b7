use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::estimate::TrendEstimate;
use crate::filters::{apply_filter_set, FilterSet};
use crate::series::{Period, TimeSeries};

/// Which part of a series is re-estimated on its own around a break.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentSide {
    /// Full-sample estimates before the break, post-break segment estimated alone.
    Left,
    /// Pre-break segment estimated alone, full-sample estimates after the break.
    Right,
    /// Each segment estimated alone.
    Both,
}

impl FromStr for SegmentSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" => Ok(SegmentSide::Left),
            "right" => Ok(SegmentSide::Right),
            "both" => Ok(SegmentSide::Both),
            other => invalid(format!("unknown segment side '{other}'")),
        }
    }
}

/// Trend estimates with the series split at `break_date`, the first
/// period of the new regime. A break outside the series gives the plain
/// estimate.
pub fn segmented_estimate(
    series: &TimeSeries,
    break_date: Period,
    fs: &FilterSet,
    side: SegmentSide,
) -> Result<TrendEstimate> {
    let n = series.len();
    let k = break_date.months_since(series.start());
    let full = apply_filter_set(series, fs)?;
    if k <= 0 || k as usize >= n {
        return Ok(full);
    }
    let k = k as usize;
    let min = 2 * fs.h() + 1;
    let mut out = full;
    if side != SegmentSide::Right {
        if n - k < min {
            return invalid(format!("segment after {break_date} has {} points, needs {min}", n - k));
        }
        let after = apply_filter_set(&series.slice(k, n)?, fs)?;
        out.values[k..].copy_from_slice(&after.values);
        out.sources[k..].copy_from_slice(&after.sources);
    }
    if side != SegmentSide::Left {
        if k < min {
            return invalid(format!("segment before {break_date} has {k} points, needs {min}"));
        }
        let before = apply_filter_set(&series.slice(0, k)?, fs)?;
        out.values[..k].copy_from_slice(&before.values);
        out.sources[..k].copy_from_slice(&before.sources);
    }
    Ok(out)
}
