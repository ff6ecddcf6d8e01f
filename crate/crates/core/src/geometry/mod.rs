//! Metric charts, developing maps and turning numbers.

mod annulus;
mod chart;
mod develop;
mod motion;
mod turning;

pub use annulus::annular_turning_number;
pub use chart::{realize, ChartModel, Holonomy, RELATOR_TOLERANCE};
pub use develop::{develop, develop_open, DevelopedPolyline};
pub use motion::{HalfMotion, Motion, PlaneMotion};
pub use turning::{turning_number_planar, whitney_turning_number};

