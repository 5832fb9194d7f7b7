//! Moving averages augmented with outlier regressors.

mod outlier;
mod plan;

pub use outlier::{check_unique, parse_outlier_json, OutlierKind, OutlierSpec};
pub use plan::{
    regressor_columns, robust_apply, robust_asym_filter, robust_symmetric_filter, PlanEntry,
    Regressor, RobustFilterPlan, RobustMa,
};
