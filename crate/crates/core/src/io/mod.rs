//! Scenario ingestion and result emission.
//!
//! A scenario is a JSON document carrying a `schema_version`. Obstacles live
//! in a GeoJSON file and environment grids in a node CSV with a JSON sidecar,
//! both referenced relative to the scenario. Validation collects every
//! problem it finds and reports file, line and field for each.

mod environment;
mod geojson;
mod locate;
mod result;
mod scenario;

pub use environment::{read_environment, write_environment, GridSidecar, ENV_HEADER};
pub use geojson::{obstacles_geojson, parse_obstacles, read_obstacles, route_geojson, COORD_DECIMALS};
pub use result::{
    emit_result, load_result, rescore, RouteResult, SolverMeta, Summary, LOG_FILE, RESULT_FILE, ROUTE_FILE,
    SUMMARY_FILE,
};
pub use scenario::{
    load_scenario, parse_scenario, BaselineSpec, BruteParams, Endpoint, FrameKind, Scenario, ScenarioFile,
    ShortestParams, SolverSpec, SCHEMA_VERSION,
};
