use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::environment::read_environment;
use super::geojson::read_obstacles;
use super::locate::locate;
use crate::archipelago::{
    build_network, default_levels, IslandNetwork, IslandSettings, LevelSpec, RunConfig, RunMode, Termination,
};
use crate::baselines::{BypassParams, SaParams};
use crate::error::{Error, Result, SchemaIssue};
use crate::evo::{Encoding, HybridParams};
use crate::geo_env::{GeoPoint, PlanningFrame, ShipModel, DEFAULT_FREE_WAYPOINTS, DEFAULT_SUBSAMPLES, NAUTICAL_MILE_M};
use crate::geom::Vec2;
use crate::penalty::PenaltyConfig;
use crate::problem::Problem;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    #[default]
    Planar,
    Geographic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Planar { x: f64, y: f64 },
    Geographic { lat: f64, lon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub levels: Vec<LevelSpec>,
    pub island: IslandSettings,
    pub hybrid: HybridParams,
    pub immigrant_fraction: f64,
    pub termination: Termination,
    pub seed: Option<u64>,
    pub deterministic: bool,
    pub workers: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let run = RunConfig::default();
        SolverSpec {
            levels: default_levels(),
            island: IslandSettings::default(),
            hybrid: run.hybrid,
            immigrant_fraction: run.immigrant_fraction,
            termination: run.termination,
            seed: None,
            deterministic: true,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShortestParams {
    pub clearance: f64,
}

impl Default for ShortestParams {
    fn default() -> Self {
        ShortestParams { clearance: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BruteParams {
    pub resolution: u32,
    /// Lambda for the exhaustive scoring; defaults to the penalty cap.
    pub lambda: Option<f64>,
}

impl Default for BruteParams {
    fn default() -> Self {
        BruteParams {
            resolution: 4,
            lambda: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineSpec {
    pub sa: SaParams,
    pub bypass: BypassParams,
    pub shortest: ShortestParams,
    pub brute: BruteParams,
}

fn default_waypoints() -> usize {
    DEFAULT_FREE_WAYPOINTS
}

fn default_subsamples() -> usize {
    DEFAULT_SUBSAMPLES
}

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u64,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub frame: FrameKind,
    pub departure: Endpoint,
    pub arrival: Endpoint,
    /// Geographic frames only; defaults to one nautical mile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meters_per_unit: Option<f64>,
    /// GeoJSON file, relative to the scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacles: Option<String>,
    /// Environment CSV, relative to the scenario; its sidecar sits next to
    /// it with a `.json` extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<String>,
    #[serde(default)]
    pub ship: ShipModel,
    pub alpha: f64,
    #[serde(default = "default_waypoints")]
    pub free_waypoints: usize,
    #[serde(default = "default_subsamples")]
    pub subsamples: usize,
    #[serde(default)]
    pub encoding: Encoding,
    #[serde(default)]
    pub penalty: PenaltyConfig,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub baselines: BaselineSpec,
}

const KNOWN_KEYS: &[&str] = &[
    "schema_version",
    "name",
    "frame",
    "departure",
    "arrival",
    "meters_per_unit",
    "obstacles",
    "environment",
    "ship",
    "alpha",
    "free_waypoints",
    "subsamples",
    "encoding",
    "penalty",
    "solver",
    "baselines",
];

/// A validated scenario with its frame, problem and island network built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub source: PathBuf,
    pub spec: ScenarioFile,
    pub frame: PlanningFrame,
    pub problem: Problem,
    pub network: IslandNetwork,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn seed(&self) -> Option<u64> {
        self.spec.solver.seed
    }

    pub fn deterministic(&self) -> bool {
        self.spec.solver.deterministic
    }

    pub fn run_config(&self) -> RunConfig {
        let s = &self.spec.solver;
        RunConfig {
            hybrid: s.hybrid,
            immigrant_fraction: s.immigrant_fraction,
            termination: s.termination,
            seed: s.seed.unwrap_or(0),
            workers: s.workers,
            mode: if s.deterministic {
                RunMode::Deterministic
            } else {
                RunMode::FreeRunning
            },
        }
    }

    /// Rebuild with command-line overrides applied and re-validated.
    pub fn with_overrides(mut self, seed: Option<u64>, deterministic: bool, workers: Option<usize>) -> Result<Self> {
        if let Some(seed) = seed {
            self.spec.solver.seed = Some(seed);
        }
        if deterministic {
            self.spec.solver.deterministic = true;
        }
        if let Some(w) = workers {
            self.spec.solver.workers = w;
        }
        let mut issues = Vec::new();
        check_solver(&self.spec.solver, "", &mut issues);
        if issues.is_empty() {
            Ok(self)
        } else {
            Err(Error::Schema {
                path: self.source.clone(),
                issues,
            })
        }
    }
}

fn issue(text: &str, field: &str, message: impl Into<String>) -> SchemaIssue {
    SchemaIssue {
        field: field.to_string(),
        line: locate(text, field),
        message: message.into(),
    }
}

/// Deserialize one top-level section, naming the innermost unknown field
/// when serde reports one.
fn section<T: DeserializeOwned>(text: &str, doc: &Value, key: &str, issues: &mut Vec<SchemaIssue>) -> Option<T> {
    let value = doc.get(key)?;
    match serde_json::from_value::<T>(value.clone()) {
        Ok(v) => Some(v),
        Err(e) => {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field") || msg.starts_with("missing field"))
                .map(|name| format!("{key}.{name}"))
                .filter(|f| locate(text, f).is_some())
                .unwrap_or_else(|| key.to_string());
            issues.push(issue(text, &field, msg));
            None
        }
    }
}

fn check_solver(s: &SolverSpec, text: &str, issues: &mut Vec<SchemaIssue>) {
    let run = RunConfig {
        hybrid: s.hybrid,
        immigrant_fraction: s.immigrant_fraction,
        termination: s.termination,
        seed: s.seed.unwrap_or(0),
        workers: s.workers,
        mode: RunMode::Deterministic,
    };
    if let Err(e) = run.validate() {
        issues.push(issue(text, "solver", e.to_string()));
    }
    if let Err(e) = build_network(&s.levels, &s.island) {
        issues.push(issue(text, "solver.levels", e.to_string()));
    }
    if s.deterministic && s.seed.is_none() {
        issues.push(issue(text, "solver.seed", "a seed is required in deterministic mode"));
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn build_frame_for(spec: &ScenarioFile) -> std::result::Result<PlanningFrame, (String, String)> {
    match (spec.frame, spec.departure, spec.arrival) {
        (FrameKind::Planar, Endpoint::Planar { x: x0, y: y0 }, Endpoint::Planar { x: x1, y: y1 }) => {
            PlanningFrame::planar(Vec2::new(x0, y0), Vec2::new(x1, y1)).map_err(|e| ("arrival".into(), e.to_string()))
        }
        (FrameKind::Geographic, Endpoint::Geographic { lat: a, lon: b }, Endpoint::Geographic { lat: c, lon: d }) => {
            PlanningFrame::geographic(
                GeoPoint::new(a, b),
                GeoPoint::new(c, d),
                spec.meters_per_unit.unwrap_or(NAUTICAL_MILE_M),
            )
            .map_err(|e| ("arrival".into(), e.to_string()))
        }
        (kind, dep, _) => {
            let field = if matches!((kind, dep), (FrameKind::Planar, Endpoint::Planar { .. }))
                || matches!((kind, dep), (FrameKind::Geographic, Endpoint::Geographic { .. }))
            {
                "arrival"
            } else {
                "departure"
            };
            let want = match kind {
                FrameKind::Planar => "{\"x\", \"y\"}",
                FrameKind::Geographic => "{\"lat\", \"lon\"}",
            };
            Err((
                field.into(),
                format!("a {kind:?} frame expects endpoints of the form {want}").to_lowercase(),
            ))
        }
    }
}

/// Parse and validate scenario text. Every problem found is reported, not
/// only the first.
pub fn parse_scenario(text: &str, source: &Path) -> Result<Scenario> {
    let schema = |issues: Vec<SchemaIssue>| Error::Schema {
        path: source.to_path_buf(),
        issues,
    };
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        schema(vec![SchemaIssue {
            field: "<document>".into(),
            line: Some(e.line()),
            message: e.to_string(),
        }])
    })?;
    let Some(obj) = doc.as_object() else {
        return Err(schema(vec![SchemaIssue {
            field: "<document>".into(),
            line: Some(1),
            message: "scenario must be a JSON object".into(),
        }]));
    };

    let mut issues = Vec::new();
    for key in obj.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            issues.push(issue(
                text,
                key,
                format!("unknown field; expected one of {}", KNOWN_KEYS.join(", ")),
            ));
        }
    }
    match obj.get("schema_version") {
        None => issues.push(SchemaIssue {
            field: "schema_version".into(),
            line: None,
            message: format!("missing; this reader supports schema_version {SCHEMA_VERSION}"),
        }),
        Some(v) if v.as_u64() != Some(SCHEMA_VERSION) => issues.push(issue(
            text,
            "schema_version",
            format!("unsupported value {v}; this reader supports {SCHEMA_VERSION}"),
        )),
        _ => {}
    }
    match obj.get("alpha") {
        None => issues.push(SchemaIssue {
            field: "alpha".into(),
            line: None,
            message: "missing; alpha must lie in [0, 1]".into(),
        }),
        Some(v) => match v.as_f64() {
            Some(a) if (0.0..=1.0).contains(&a) => {}
            Some(a) => issues.push(issue(text, "alpha", format!("alpha = {a} must lie in [0, 1]"))),
            None => issues.push(issue(text, "alpha", "must be a number in [0, 1]")),
        },
    }
    for key in ["departure", "arrival"] {
        if !obj.contains_key(key) {
            issues.push(SchemaIssue {
                field: key.into(),
                line: None,
                message: "missing".into(),
            });
        }
    }

    let frame: Option<FrameKind> = section(text, &doc, "frame", &mut issues);
    let _: Option<Endpoint> = section(text, &doc, "departure", &mut issues);
    let _: Option<Endpoint> = section(text, &doc, "arrival", &mut issues);
    let _: Option<String> = section(text, &doc, "name", &mut issues);
    let mpu: Option<f64> = section(text, &doc, "meters_per_unit", &mut issues);
    let obstacles: Option<String> = section(text, &doc, "obstacles", &mut issues);
    let environment: Option<String> = section(text, &doc, "environment", &mut issues);
    let ship: Option<ShipModel> = section(text, &doc, "ship", &mut issues);
    let m: Option<usize> = section(text, &doc, "free_waypoints", &mut issues);
    let k: Option<usize> = section(text, &doc, "subsamples", &mut issues);
    let _: Option<Encoding> = section(text, &doc, "encoding", &mut issues);
    let penalty: Option<PenaltyConfig> = section(text, &doc, "penalty", &mut issues);
    let solver: Option<SolverSpec> = section(text, &doc, "solver", &mut issues);
    let _: Option<BaselineSpec> = section(text, &doc, "baselines", &mut issues);

    if let Some(ship) = ship {
        if let Err(e) = ship.validate() {
            issues.push(issue(text, "ship", e.to_string()));
        }
    }
    if m == Some(0) {
        issues.push(issue(text, "free_waypoints", "must be at least 1"));
    }
    if k == Some(0) {
        issues.push(issue(text, "subsamples", "must be at least 1"));
    }
    if let Some(p) = penalty {
        if let Err(e) = p.validate() {
            issues.push(issue(text, "penalty", e.to_string()));
        }
    }
    let solver_present = obj.contains_key("solver");
    match solver {
        Some(s) => check_solver(&s, text, &mut issues),
        None if !solver_present => check_solver(&SolverSpec::default(), text, &mut issues),
        None => {}
    }
    if mpu.is_some() && frame != Some(FrameKind::Geographic) {
        issues.push(issue(text, "meters_per_unit", "only meaningful for a geographic frame"));
    }
    let base = source.parent().unwrap_or(Path::new("."));
    for (key, rel) in [("obstacles", &obstacles), ("environment", &environment)] {
        if let Some(rel) = rel {
            let p = resolve(base, rel);
            if !p.is_file() {
                issues.push(issue(
                    text,
                    key,
                    format!("referenced file {} does not exist", p.display()),
                ));
            }
        }
    }
    if let Some(rel) = &environment {
        let sidecar = resolve(base, rel).with_extension("json");
        if !sidecar.is_file() {
            issues.push(issue(
                text,
                "environment",
                format!("sidecar {} does not exist", sidecar.display()),
            ));
        }
    }

    let spec: Option<ScenarioFile> = if issues.is_empty() {
        match serde_json::from_value(doc.clone()) {
            Ok(s) => Some(s),
            Err(e) => {
                issues.push(issue(text, "<document>", e.to_string()));
                None
            }
        }
    } else {
        None
    };
    let frame = spec.as_ref().and_then(|s| match build_frame_for(s) {
        Ok(f) => Some(f),
        Err((field, msg)) => {
            issues.push(issue(text, &field, msg));
            None
        }
    });
    if !issues.is_empty() {
        issues.sort_by_key(|i| i.line.unwrap_or(usize::MAX));
        return Err(schema(issues));
    }
    let spec = spec.expect("no issues means the document parsed");
    let frame = frame.expect("no issues means the frame was built");

    let obstacles = match &spec.obstacles {
        Some(rel) => read_obstacles(&resolve(base, rel), &frame)?,
        None => Vec::new(),
    };
    let environment = match &spec.environment {
        Some(rel) => Some(read_environment(&resolve(base, rel))?),
        None => None,
    };
    let problem = Problem::new(
        frame.span(),
        spec.free_waypoints,
        obstacles,
        environment,
        spec.ship,
        spec.alpha,
    )
    .and_then(|p| p.with_penalty(spec.penalty))
    .and_then(|p| p.with_subsamples(spec.subsamples))
    .map(|p| p.with_encoding(spec.encoding))
    .map_err(|e| schema(vec![issue(text, "environment", e.to_string())]))?;
    let network = build_network(&spec.solver.levels, &spec.solver.island)?;
    Ok(Scenario {
        source: source.to_path_buf(),
        spec,
        frame,
        problem,
        network,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}
