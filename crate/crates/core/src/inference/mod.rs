//! Variance, degrees of freedom and confidence intervals for moving averages.

mod intervals;
mod spectrum;

pub use intervals::{
    confint_robust, confint_uniform, student_quantile, IntervalOptions, IntervalRow,
    IntervalSeries,
};
pub use spectrum::{
    degrees_of_freedom, dense_traces, residual_norm2, sigma2_hat, spectrum, trace_delta,
    trace_delta2_fast, Sigma2Form, SmootherSpectrum,
};
