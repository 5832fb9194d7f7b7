use std::fmt;
use std::str::FromStr;

use super::estimators::fit_window;
use super::window::{Method, Window, WindowFit};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Source, TrendEstimate};
use crate::series::TimeSeries;

/// How the first and last `h` periods are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Fit on the shorter window of available observations.
    #[default]
    NaPad,
    /// Extend the nearest full-window fit along its slope.
    Extrapolate,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::NaPad => "na_pad",
            Boundary::Extrapolate => "extrapolate",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "na_pad" | "na-pad" | "napad" => Ok(Boundary::NaPad),
            "extrapolate" => Ok(Boundary::Extrapolate),
            other => invalid(format!("unknown boundary mode '{other}'")),
        }
    }
}

/// Slides a robust window estimator of half-width `h` along the series.
pub fn robust_smooth(
    series: &TimeSeries,
    method: Method,
    h: usize,
    degree: usize,
    boundary: Boundary,
) -> Result<TrendEstimate> {
    if !method.supports_degree(degree) {
        return invalid(format!("method {method} does not support degree {degree}"));
    }
    let y = series.values();
    let n = y.len();
    if h == 0 || n < 2 * h + 1 {
        return invalid(format!("series of length {n} is too short for half-width {h}"));
    }
    let fit_at = |t: usize| -> Option<WindowFit> {
        let lo = t.saturating_sub(h);
        let hi = (t + h).min(n - 1);
        fit_window(&Window::from_values(&y[lo..=hi], t - lo), method, degree)
    };

    let mut values = vec![f64::NAN; n];
    let mut sources = vec![Source::Missing; n];
    for t in h..n - h {
        if let Some(f) = fit_at(t) {
            values[t] = f.level();
            sources[t] = Source::Window;
        }
    }
    match boundary {
        Boundary::NaPad => {
            for t in (0..h).chain(n - h..n) {
                if let Some(f) = fit_at(t) {
                    values[t] = f.level();
                    sources[t] = Source::SubWindow { size: t.min(h) + (n - 1 - t).min(h) + 1 };
                }
            }
        }
        Boundary::Extrapolate => {
            if let Some(f) = fit_at(n - 1 - h) {
                for steps in 1..=h {
                    values[n - 1 - h + steps] = f.level() + steps as f64 * f.slope();
                    sources[n - 1 - h + steps] = Source::Extrapolated { steps };
                }
            }
            if let Some(f) = fit_at(h) {
                for steps in 1..=h {
                    values[h - steps] = f.level() - steps as f64 * f.slope();
                    sources[h - steps] = Source::Extrapolated { steps };
                }
            }
        }
    }
    Ok(TrendEstimate::new(series.start(), values, sources))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::median;
    use crate::series::Period;

    fn ts(values: Vec<f64>) -> TimeSeries {
        TimeSeries::new(Period::new(2018, 1).unwrap(), values).unwrap()
    }

    #[test]
    fn exact_line_everywhere() {
        let y: Vec<f64> = (0..30).map(|t| 3.0 + 0.25 * t as f64).collect();
        for m in [Method::Rm, Method::Lms, Method::Lts, Method::Lqd, Method::Dr] {
            for b in [Boundary::NaPad, Boundary::Extrapolate] {
                let e = robust_smooth(&ts(y.clone()), m, 6, 1, b).unwrap();
                for (a, b) in e.values.iter().zip(&y) {
                    assert!((a - b).abs() < 1e-9, "{m}");
                }
            }
        }
    }

    #[test]
    fn med_extrapolation_is_flat() {
        let y: Vec<f64> = (0..30).map(|t| (t as f64 * 0.9).sin() + t as f64).collect();
        let e = robust_smooth(&ts(y), Method::Med, 6, 0, Boundary::Extrapolate).unwrap();
        for t in 24..30 {
            assert_eq!(e.values[t], e.values[23]);
            assert_eq!(e.sources[t], Source::Extrapolated { steps: t - 23 });
        }
    }

    #[test]
    fn na_pad_last_point_uses_trailing_observations() {
        let y: Vec<f64> = (0..30).map(|t| ((t * 7) % 11) as f64).collect();
        let e = robust_smooth(&ts(y.clone()), Method::Med, 6, 0, Boundary::NaPad).unwrap();
        assert_eq!(e.sources[29], Source::SubWindow { size: 7 });
        assert_eq!(e.values[29], median(&y[23..]).unwrap());
    }

    #[test]
    fn med_lags_monotone_series() {
        let y: Vec<f64> = (0..30).map(|t| (t as f64).powf(1.3)).collect();
        let e = robust_smooth(&ts(y.clone()), Method::Med, 6, 0, Boundary::NaPad).unwrap();
        for t in 24..30 {
            assert!(e.values[t] < y[t]);
        }
    }

    #[test]
    fn unsupported_degree() {
        let y = ts(vec![1.0; 30]);
        assert!(robust_smooth(&y, Method::Lqd, 6, 2, Boundary::NaPad).is_err());
        assert!(robust_smooth(&y, Method::Lts, 6, 2, Boundary::NaPad).is_ok());
    }
}
