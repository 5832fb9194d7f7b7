//! Simulated scenarios, real-time vintages, revisions and turning points.

mod scenario;
mod segment;
mod turning;
mod vintage;

pub use scenario::{simulate, ScenarioSpec, ShockKind, DEFAULT_VERTEX};
pub use segment::{segmented_estimate, SegmentSide};
pub use turning::{turning_points, TurningKind, TurningPoint};
pub use vintage::{revision_metrics, vintages, RevisionMetrics, VintageMatrix};
