use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::series::{Period, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShockKind {
    Ao,
    Ls,
}

/// Simulated series: polynomial trend, one shock, no irregular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub trend_degree: usize,
    /// Trend coefficients in `t` (constant first); defaults depend on the degree.
    pub coefficients: Option<Vec<f64>>,
    pub shock_kind: ShockKind,
    /// Relative size for multiplicative shocks, absolute otherwise.
    pub shock_size: f64,
    pub shock_date: Period,
    pub start_date: Period,
    pub length: usize,
    pub multiplicative: bool,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            trend_degree: 0,
            coefficients: None,
            shock_kind: ShockKind::Ao,
            shock_size: 0.10,
            shock_date: Period::new(2022, 1).unwrap(),
            start_date: Period::new(2018, 1).unwrap(),
            length: 72,
            multiplicative: true,
        }
    }
}

/// Index of the minimum of the default degree-2 trend.
pub const DEFAULT_VERTEX: usize = 30;

impl ScenarioSpec {
    pub fn new(trend_degree: usize, shock_kind: ShockKind) -> Self {
        ScenarioSpec { trend_degree, shock_kind, ..Default::default() }
    }

    /// `100`, `100 + 0.5t` and `100 + 0.02(t − 30)²` for degrees 0, 1, 2.
    pub fn trend_coefficients(&self) -> Result<Vec<f64>> {
        if let Some(c) = &self.coefficients {
            if c.len() != self.trend_degree + 1 || c.iter().any(|v| !v.is_finite()) {
                return invalid(format!(
                    "expected {} finite trend coefficients, got {:?}",
                    self.trend_degree + 1,
                    c
                ));
            }
            return Ok(c.clone());
        }
        let v = DEFAULT_VERTEX as f64;
        match self.trend_degree {
            0 => Ok(vec![100.0]),
            1 => Ok(vec![100.0, 0.5]),
            2 => Ok(vec![100.0 + 0.02 * v * v, -0.04 * v, 0.02]),
            d => invalid(format!("trend degree {d} not supported (0, 1 or 2)")),
        }
    }

    pub fn shock_index(&self) -> Result<usize> {
        let k = self.shock_date.months_since(self.start_date);
        if k < 0 || k as usize >= self.length {
            return invalid(format!(
                "shock date {} outside {}..{}",
                self.shock_date,
                self.start_date,
                self.start_date.offset(self.length as i64 - 1)
            ));
        }
        Ok(k as usize)
    }

    /// Noise-free trend without the shock.
    pub fn trend(&self) -> Result<Vec<f64>> {
        let c = self.trend_coefficients()?;
        Ok((0..self.length)
            .map(|t| c.iter().rev().fold(0.0, |acc, b| acc * t as f64 + b))
            .collect())
    }
}

pub fn simulate(spec: &ScenarioSpec) -> Result<TimeSeries> {
    if spec.length == 0 {
        return invalid("scenario length must be positive");
    }
    let t0 = spec.shock_index()?;
    let mut y = spec.trend()?;
    let hit = |t: usize| match spec.shock_kind {
        ShockKind::Ao => t == t0,
        ShockKind::Ls => t >= t0,
    };
    for (t, v) in y.iter_mut().enumerate() {
        if hit(t) {
            if spec.multiplicative {
                *v *= 1.0 + spec.shock_size;
            } else {
                *v += spec.shock_size;
            }
        }
    }
    TimeSeries::new(spec.start_date, y)
}
