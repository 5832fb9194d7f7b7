use std::fmt;

use crate::series::Period;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurningKind {
    Upturn,
    Downturn,
}

impl fmt::Display for TurningKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TurningKind::Upturn => "upturn",
            TurningKind::Downturn => "downturn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    /// Index of the trough or peak.
    pub index: usize,
    pub period: Period,
    pub kind: TurningKind,
}

/// Zellner rule: an upturn at `t−1` when
/// `x[t−3] ≥ x[t−2] ≥ x[t−1] < x[t] ≤ x[t+1]`, and the mirror pattern for a
/// downturn. Dated at the extremum `t−1`. Windows touching `NaN` are skipped.
pub fn turning_points(start: Period, x: &[f64]) -> Vec<TurningPoint> {
    let mut out = Vec::new();
    if x.len() < 5 {
        return out;
    }
    for t in 3..x.len() - 1 {
        let w = &x[t - 3..=t + 1];
        if w.iter().any(|v| v.is_nan()) {
            continue;
        }
        let kind = if w[0] >= w[1] && w[1] >= w[2] && w[2] < w[3] && w[3] <= w[4] {
            TurningKind::Upturn
        } else if w[0] <= w[1] && w[1] <= w[2] && w[2] > w[3] && w[3] >= w[4] {
            TurningKind::Downturn
        } else {
            continue;
        };
        out.push(TurningPoint { index: t - 1, period: start.offset(t as i64 - 1), kind });
    }
    out
}
