//! Trend-cycle estimation with Henderson, Musgrave and robust moving averages,
//! robust window regressions, and confidence intervals for linear smoothers.

pub mod error;
pub mod estimate;
pub mod evaluation;
pub mod filters;
pub mod inference;
pub mod io;
mod linalg;
pub mod nonlinear;
pub mod registry;
pub mod robust_ma;
pub mod series;

pub use error::{Error, Result};
pub use estimate::{Source, TrendEstimate};
pub use series::{Period, TimeSeries};
