//! Reference solvers: simulated annealing, the visibility-graph shortest
//! path, bypass enumeration with death-penalty populations, and exhaustive
//! search for small instances.

mod bypass;
mod exhaustive;
mod sa;
mod visibility;

pub use bypass::{
    bypass_solver, enumerate_bypasses, obstacles_between, BypassClass, BypassParams, BypassResult, Side,
    DEFAULT_BYPASS_CAP,
};
pub use exhaustive::{exhaustive_search, ExhaustiveResult, MAX_EXHAUSTIVE_BITS};
pub use sa::{metropolis_accept, simulated_annealing, SaParams};
pub use visibility::{inflate, shortest_feasible_path, PathOutcome};
