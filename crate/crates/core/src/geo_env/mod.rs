//! Planning-frame geometry, environment sampling and the physical route cost
//! `S = alpha * T + (1 - alpha) * C`.
//!
//! All lengths are in planning-frame units and all times in the matching
//! time unit of [`ShipModel::speed`]. The comfort cost `C` and the response
//! tensors carry whatever consistent units the caller supplies.

mod cost;
mod field;
mod frame;
mod route;
mod ship;

pub use cost::{
    combine, comfort_cost, comfort_per_segment, route_cost, voyage_time, CostBreakdown, SegmentCost, DEFAULT_SUBSAMPLES,
};
pub use field::{cell_size_for_degrees, EnvironmentField, FieldSample, DEFAULT_CELL_DEGREES};
pub use frame::{build_frame, GeoPoint, PlanningFrame, Projection, EARTH_RADIUS_M, NAUTICAL_MILE_M};
pub(crate) use route::uniform_points;
pub use route::{polyline_length, segment_tangent, Route, DEFAULT_FREE_WAYPOINTS};
pub use ship::ShipModel;
