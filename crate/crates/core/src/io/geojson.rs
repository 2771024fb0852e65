use std::path::Path;

use serde_json::{json, Value};

use super::locate::locate_nth;
use crate::error::{Error, Result, SchemaIssue};
use crate::geo_env::{GeoPoint, PlanningFrame};
use crate::geom::Vec2;
use crate::penalty::Obstacle;

/// Decimal places of emitted coordinates.
pub const COORD_DECIMALS: i32 = 6;

pub(crate) fn round_coord(v: f64) -> f64 {
    let s = 10f64.powi(COORD_DECIMALS);
    (v * s).round() / s
}

/// Position in the scenario's input coordinates: `[lon, lat]` for a
/// geographic frame, pre-rotation `[x, y]` for a planar one.
fn to_frame(frame: &PlanningFrame, c: [f64; 2]) -> Vec2 {
    if frame.is_geographic() {
        frame.geo_to_frame(GeoPoint::new(c[1], c[0]))
    } else {
        frame.to_frame(Vec2::new(c[0], c[1]))
    }
}

fn from_frame(frame: &PlanningFrame, q: Vec2) -> [f64; 2] {
    if frame.is_geographic() {
        let g = frame.frame_to_geo(q);
        [g.lon, g.lat]
    } else {
        let p = frame.from_frame(q);
        [p.x, p.y]
    }
}

fn ring_of(value: &Value) -> std::result::Result<Vec<[f64; 2]>, String> {
    let arr = value.as_array().ok_or("ring must be an array of positions")?;
    arr.iter()
        .map(|p| match p.as_array().map(|a| a.as_slice()) {
            Some([x, y, ..]) => match (x.as_f64(), y.as_f64()) {
                (Some(x), Some(y)) => Ok([x, y]),
                _ => Err("positions must be numeric".to_string()),
            },
            _ => Err("each position needs two coordinates".to_string()),
        })
        .collect()
}

/// Outer rings of every Polygon and MultiPolygon feature, mapped into the
/// planning frame. Holes are ignored.
pub fn parse_obstacles(text: &str, source: &Path, frame: &PlanningFrame) -> Result<Vec<Obstacle>> {
    let schema = |issues| Error::Schema {
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
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(schema(vec![SchemaIssue {
            field: "type".into(),
            line: Some(1),
            message: "expected a GeoJSON FeatureCollection".into(),
        }]));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    let mut issues = Vec::new();
    let mut obstacles = Vec::new();
    for (k, f) in features.iter().enumerate() {
        let line = locate_nth(text, "\"geometry\"", k);
        let mut bad = |message: String| {
            issues.push(SchemaIssue {
                field: format!("features[{k}].geometry"),
                line,
                message,
            })
        };
        let geom = f.get("geometry").unwrap_or(&Value::Null);
        let coords = geom.get("coordinates").unwrap_or(&Value::Null);
        let polygons: Vec<&Value> = match geom.get("type").and_then(Value::as_str) {
            Some("Polygon") => vec![coords],
            Some("MultiPolygon") => coords.as_array().map(|a| a.iter().collect()).unwrap_or_default(),
            other => {
                bad(format!(
                    "unsupported geometry type {other:?}; expected Polygon or MultiPolygon"
                ));
                continue;
            }
        };
        for poly in polygons {
            let Some(outer) = poly.as_array().and_then(|rings| rings.first()) else {
                bad("polygon has no rings".into());
                continue;
            };
            match ring_of(outer) {
                Ok(ring) => {
                    let pts = ring.into_iter().map(|c| to_frame(frame, c)).collect();
                    match Obstacle::new(pts) {
                        Ok(o) => obstacles.push(o),
                        Err(e) => bad(e.to_string()),
                    }
                }
                Err(msg) => bad(msg),
            }
        }
    }
    if issues.is_empty() {
        Ok(obstacles)
    } else {
        Err(schema(issues))
    }
}

pub fn read_obstacles(path: &Path, frame: &PlanningFrame) -> Result<Vec<Obstacle>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_obstacles(&text, path, frame)
}

fn closed_ring(o: &Obstacle, frame: &PlanningFrame) -> Vec<[f64; 2]> {
    let mut ring: Vec<[f64; 2]> = o
        .vertices()
        .iter()
        .map(|&v| from_frame(frame, v).map(round_coord))
        .collect();
    ring.push(ring[0]);
    ring
}

/// Obstacles as a FeatureCollection in the scenario's input coordinates.
pub fn obstacles_geojson(obstacles: &[Obstacle], frame: &PlanningFrame) -> Value {
    let features: Vec<Value> = obstacles
        .iter()
        .enumerate()
        .map(|(i, o)| {
            json!({
                "type": "Feature",
                "properties": {"id": i},
                "geometry": {"type": "Polygon", "coordinates": [closed_ring(o, frame)]},
            })
        })
        .collect();
    json!({"type": "FeatureCollection", "features": features})
}

/// Route as a LineString feature, coordinates rounded to six decimals.
pub fn route_geojson(points: &[Vec2], frame: &PlanningFrame, properties: Value) -> Value {
    let coords: Vec<[f64; 2]> = points.iter().map(|&q| from_frame(frame, q).map(round_coord)).collect();
    json!({
        "type": "Feature",
        "properties": properties,
        "geometry": {"type": "LineString", "coordinates": coords},
    })
}
