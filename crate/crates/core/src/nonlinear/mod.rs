//! Robust regression estimators applied on sliding windows.

mod estimators;
mod smooth;
mod window;

pub use estimators::{
    dr_window, fit_window, lms_objective, lms_order, lms_window, lqd_objective, lqd_order,
    lqd_window, lts_coverage, lts_objective, lts_window, med_window, rdepth, rm_window,
};
pub use smooth::{robust_smooth, Boundary};
pub use window::{lower_median, median, Method, Window, WindowFit};
