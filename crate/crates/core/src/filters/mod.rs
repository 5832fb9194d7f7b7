//! Linear trend-cycle filters and their end-point members.

mod endpoint;
mod filter_set;
mod kernel;
mod local_poly;
mod mmsre;
mod moving_average;

pub use endpoint::{cut_and_normalize, ClfTable, CLF_HALF_WIDTH};
pub use filter_set::{
    apply_filter_set, clf_filter_set, cut_normalize_filter_set, default_icr_for_length,
    henderson_filter, icr, mmsre_filter_set, musgrave_filter_set, select_henderson_length,
    FilterSet,
};
pub use kernel::{henderson_kernel, uniform_kernel};
pub use local_poly::local_poly_filter;
pub use mmsre::{mmsre_asym_filter, slope_ratio_for_icr, MmsreSpec};
pub use moving_average::MovingAverage;

pub(crate) use local_poly::wls_weights;
pub(crate) use mmsre::revision_filter;
