//! Ship route optimization through obstacle fields with a hierarchical
//! GA-EDA island model and a smooth annealed penalty.
//!
//! The search object is a [`Route`] with fixed, evenly spaced abscissae in a
//! rotated planning frame. A [`Problem`] bundles the physical cost, the
//! obstacle and turn constraints and the penalty configuration; every solver
//! in [`archipelago`] and [`baselines`] evaluates candidates through it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archipelago;
pub mod baselines;
pub mod error;
pub mod evo;
pub mod geo_env;
pub mod geom;
pub mod io;
pub mod outcome;
pub mod penalty;
pub mod problem;

pub use error::{Error, Result, SchemaIssue};
pub use geo_env::{EnvironmentField, GeoPoint, PlanningFrame, Route, ShipModel};
pub use geom::Vec2;
pub use outcome::{ConvergenceLog, LogRow, Solution, SolverOutcome, TracePoint};
pub use penalty::{ConstraintReport, Obstacle, PenaltyConfig};
pub use problem::{Evaluation, Problem};
