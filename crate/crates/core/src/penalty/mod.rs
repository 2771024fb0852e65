//! Obstacle and turn constraints, the smooth penalty `P`, and the annealed
//! generalized cost `E = |S + iP| * rho(lambda, P)`.

mod constraints;
mod generalized;
mod obstacle;
mod smooth;

pub use constraints::{
    evaluate_constraints, split_areas, split_ratio, turn_slacks, ConstraintReport, SplitAreas, DEFAULT_AREA_TOLERANCE,
};
pub use generalized::{anneal, generalized_cost, multiplier, penalty, GeneralizedCost, PenaltyConfig, PenaltyParams};
pub use obstacle::Obstacle;
pub use smooth::{smooth_delta_inv, smooth_step, step_penalty, EXP_CLAMP};
