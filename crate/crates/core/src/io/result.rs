use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::geojson::{round_coord, route_geojson};
use super::scenario::{Scenario, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::geo_env::{combine, comfort_per_segment, CostBreakdown, GeoPoint, SegmentCost};
use crate::geom::Vec2;
use crate::outcome::{ConvergenceLog, SolverOutcome};
use crate::penalty::ConstraintReport;

pub const ROUTE_FILE: &str = "route.geojson";
pub const RESULT_FILE: &str = "result.json";
pub const LOG_FILE: &str = "convergence.csv";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverMeta {
    pub solver: String,
    pub seed: Option<u64>,
    pub generations: u64,
    pub evaluations: u64,
    pub lambda_final: f64,
    pub wall_ms: f64,
}

/// Everything reported about one route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteResult {
    pub schema_version: u64,
    pub scenario: String,
    pub feasible: bool,
    /// Planning-frame waypoints at full precision.
    pub waypoints_frame: Vec<[f64; 2]>,
    /// `[lon, lat]` per waypoint for geographic scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoints_geo: Option<Vec<[f64; 2]>>,
    pub cost: CostBreakdown,
    /// Absent for polylines that are not graphs over the x axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintReport>,
    pub penalty: f64,
    pub generalized_cost: f64,
    pub meta: SolverMeta,
}

/// Short machine-readable verdict for baseline comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub solver: String,
    pub feasible: bool,
    pub best_cost: Option<f64>,
    pub wall_ms: f64,
    pub evaluations: u64,
}

fn breakdown(scenario: &Scenario, points: &[Vec2]) -> Result<CostBreakdown> {
    let p = &scenario.problem;
    let comfort = comfort_per_segment(points, p.environment(), p.ship(), p.subsamples())?;
    let segments: Vec<SegmentCost> = points
        .windows(2)
        .zip(comfort)
        .map(|(w, c)| SegmentCost {
            time: (w[1] - w[0]).norm() / p.ship().speed,
            comfort: c,
        })
        .collect();
    let time = segments.iter().map(|s| s.time).sum();
    let comfort = segments.iter().map(|s| s.comfort).sum();
    Ok(CostBreakdown {
        time,
        comfort,
        total: combine(p.alpha(), time, comfort),
        alpha: p.alpha(),
        segments,
    })
}

impl RouteResult {
    /// Result for the outcome's reported route (best feasible, else the
    /// fallback). `None` when the solver produced no candidate at all.
    pub fn from_outcome(scenario: &Scenario, outcome: &SolverOutcome) -> Result<Option<Self>> {
        let Some(sol) = outcome.reported() else {
            return Ok(None);
        };
        let meta = SolverMeta {
            solver: outcome.solver.clone(),
            seed: scenario.seed(),
            generations: outcome.generations,
            evaluations: outcome.evaluations,
            lambda_final: outcome.lambda_final,
            wall_ms: outcome.wall_ms,
        };
        let mut cost = breakdown(scenario, sol.route.points())?;
        // keep the solver's own sums so S round-trips exactly
        cost.time = sol.evaluation.time;
        cost.comfort = sol.evaluation.comfort;
        cost.total = sol.evaluation.cost;
        Ok(Some(Self::build(
            scenario,
            sol.route.points(),
            cost,
            Some(sol.evaluation.report.clone()),
            sol.penalty,
            sol.value,
            outcome.is_feasible(),
            meta,
        )))
    }

    /// Result for an arbitrary obstacle-free polyline, e.g. a
    /// visibility-graph path. It need not be a graph over the x axis, so no
    /// constraint report is attached.
    pub fn from_polyline(scenario: &Scenario, points: &[Vec2], meta: SolverMeta) -> Result<Self> {
        let cost = breakdown(scenario, points)?;
        let total = cost.total;
        Ok(Self::build(scenario, points, cost, None, 0.0, total, true, meta))
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        scenario: &Scenario,
        points: &[Vec2],
        cost: CostBreakdown,
        constraints: Option<ConstraintReport>,
        penalty: f64,
        generalized_cost: f64,
        feasible: bool,
        meta: SolverMeta,
    ) -> Self {
        let frame = &scenario.frame;
        let waypoints_geo = frame.is_geographic().then(|| {
            points
                .iter()
                .map(|&q| {
                    let g: GeoPoint = frame.frame_to_geo(q);
                    [round_coord(g.lon), round_coord(g.lat)]
                })
                .collect()
        });
        RouteResult {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.name().to_string(),
            feasible,
            waypoints_frame: points.iter().map(|p| [p.x, p.y]).collect(),
            waypoints_geo,
            cost,
            constraints,
            penalty,
            generalized_cost,
            meta,
        }
    }

    pub fn points(&self) -> Vec<Vec2> {
        self.waypoints_frame.iter().map(|&[x, y]| Vec2::new(x, y)).collect()
    }

    /// Route GeoJSON; free of timing data so that seeded runs reproduce it
    /// byte for byte.
    pub fn route_geojson(&self, scenario: &Scenario) -> String {
        let props = json!({
            "scenario": self.scenario,
            "solver": self.meta.solver,
            "feasible": self.feasible,
            "cost": self.cost.total,
        });
        let mut s = serde_json::to_string_pretty(&route_geojson(&self.points(), &scenario.frame, props))
            .expect("GeoJSON values serialize");
        s.push('\n');
        s
    }
}

/// Recompute `S` for an emitted route under the scenario's problem.
pub fn rescore(scenario: &Scenario, result: &RouteResult) -> Result<f64> {
    Ok(breakdown(scenario, &result.points())?.total)
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write route GeoJSON, result JSON, convergence CSV and summary JSON into
/// `dir`. Returns the paths written.
pub fn emit_result(
    dir: &Path,
    scenario: &Scenario,
    result: Option<&RouteResult>,
    log: &ConvergenceLog,
    summary: &Summary,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    if let Some(result) = result {
        let route = dir.join(ROUTE_FILE);
        write(&route, result.route_geojson(scenario))?;
        written.push(route);
        let res = dir.join(RESULT_FILE);
        let text = serde_json::to_string_pretty(result).map_err(|e| Error::Internal(e.to_string()))?;
        write(&res, text + "\n")?;
        written.push(res);
    }
    let csv_path = dir.join(LOG_FILE);
    let mut buf = Vec::new();
    log.write_csv(&mut buf)?;
    if log.rows.is_empty() {
        buf = format!("{}\n", crate::outcome::LOG_HEADER).into_bytes();
    }
    write(&csv_path, buf)?;
    written.push(csv_path);
    let sum = dir.join(SUMMARY_FILE);
    let text = serde_json::to_string_pretty(summary).map_err(|e| Error::Internal(e.to_string()))?;
    write(&sum, text + "\n")?;
    written.push(sum);
    Ok(written)
}

pub fn load_result(path: &Path) -> Result<RouteResult> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        path: path.to_path_buf(),
        issues: vec![crate::error::SchemaIssue {
            field: "<document>".into(),
            line: Some(e.line()),
            message: e.to_string(),
        }],
    })
}

impl Summary {
    pub fn from_outcome(outcome: &SolverOutcome) -> Self {
        Summary {
            solver: outcome.solver.clone(),
            feasible: outcome.is_feasible(),
            best_cost: outcome.best.as_ref().map(|s| s.cost()),
            wall_ms: outcome.wall_ms,
            evaluations: outcome.evaluations,
        }
    }
}
