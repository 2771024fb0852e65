//! Hierarchical island network: populations at increasing bit resolution,
//! each with its own annealing rate, passing EDA models coarse to fine.

mod island;
mod migration;
mod network;
mod run;
mod scaling;

pub use migration::{immigrant_count, incorporate, project_model, MigrationMessage};
pub use network::{build_network, default_levels, IslandConfig, IslandNetwork, IslandSettings, LevelSpec};
pub use run::{run, MigrationRecord, RunConfig, RunMode, RunResult, Termination};
pub use scaling::{thread_scaling, ScalingRow};
