use std::path::Path;

use serde::{Deserialize, Serialize};

use super::locate::locate;
use crate::error::{Error, Result, SchemaIssue};
use crate::geo_env::EnvironmentField;
use crate::geom::Vec2;

/// Grid geometry stored next to the node CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSidecar {
    pub origin: [f64; 2],
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct NodeRow {
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
    wx: f64,
    wy: f64,
}

pub const ENV_HEADER: &str = "x,y,vx,vy,wx,wy";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_sidecar(path: &Path) -> Result<GridSidecar> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let schema = |issues| Error::Schema {
        path: path.to_path_buf(),
        issues,
    };
    let sc: GridSidecar = serde_json::from_str(&text).map_err(|e| {
        schema(vec![SchemaIssue {
            field: "<document>".into(),
            line: Some(e.line()),
            message: e.to_string(),
        }])
    })?;
    let mut issues = Vec::new();
    if !(sc.cell > 0.0 && sc.cell.is_finite()) {
        issues.push(SchemaIssue {
            field: "cell".into(),
            line: locate(&text, "cell"),
            message: "must be positive".into(),
        });
    }
    for (field, n) in [("nx", sc.nx), ("ny", sc.ny)] {
        if n < 2 {
            issues.push(SchemaIssue {
                field: field.into(),
                line: locate(&text, field),
                message: "grid needs at least 2 nodes per axis".into(),
            });
        }
    }
    if issues.is_empty() {
        Ok(sc)
    } else {
        Err(schema(issues))
    }
}

/// Read a node CSV and its `.json` sidecar. Rows may come in any order but
/// must cover every node exactly once.
pub fn read_environment(csv_path: &Path) -> Result<EnvironmentField> {
    let sc = read_sidecar(&csv_path.with_extension("json"))?;
    let mut reader = csv::Reader::from_path(csv_path).map_err(|e| Error::Io {
        path: csv_path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })?;
    let origin = Vec2::new(sc.origin[0], sc.origin[1]);
    let n = sc.nx * sc.ny;
    let mut wind = vec![Vec2::ZERO; n];
    let mut wave = vec![Vec2::ZERO; n];
    let mut seen = vec![false; n];
    let mut issues = Vec::new();
    let tol = 1e-6 * sc.cell;

    let headers = reader.headers().map_err(|e| Error::Internal(e.to_string()))?.clone();
    for rec in reader.records() {
        let parsed = rec.and_then(|r| {
            let line = r.position().map(|p| p.line() as usize);
            r.deserialize::<NodeRow>(Some(&headers)).map(|row| (row, line))
        });
        let (row, line) = match parsed {
            Ok(v) => v,
            Err(e) => {
                issues.push(SchemaIssue {
                    field: "row".into(),
                    line: e.position().map(|p| p.line() as usize),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let fi = (row.x - origin.x) / sc.cell;
        let fj = (row.y - origin.y) / sc.cell;
        let (i, j) = (fi.round(), fj.round());
        let off_grid = (fi - i).abs() * sc.cell > tol || (fj - j).abs() * sc.cell > tol;
        if off_grid || i < 0.0 || j < 0.0 || i as usize >= sc.nx || j as usize >= sc.ny {
            issues.push(SchemaIssue {
                field: "x,y".into(),
                line,
                message: format!("({}, {}) is not a node of the sidecar grid", row.x, row.y),
            });
            continue;
        }
        let k = j as usize * sc.nx + i as usize;
        if seen[k] {
            issues.push(SchemaIssue {
                field: "x,y".into(),
                line,
                message: format!("node ({}, {}) appears more than once", row.x, row.y),
            });
            continue;
        }
        let values = [row.vx, row.vy, row.wx, row.wy];
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            issues.push(SchemaIssue {
                field: ["vx", "vy", "wx", "wy"][pos].into(),
                line,
                message: "must be finite".into(),
            });
            continue;
        }
        seen[k] = true;
        wind[k] = Vec2::new(row.vx, row.vy);
        wave[k] = Vec2::new(row.wx, row.wy);
    }
    let missing = seen.iter().filter(|s| !**s).count();
    if missing > 0 && issues.is_empty() {
        issues.push(SchemaIssue {
            field: "rows".into(),
            line: None,
            message: format!("{missing} of {n} grid nodes have no row"),
        });
    }
    if !issues.is_empty() {
        return Err(Error::Schema {
            path: csv_path.to_path_buf(),
            issues,
        });
    }
    EnvironmentField::new(origin, sc.cell, sc.nx, sc.ny, wind, wave)
}

/// Write the node CSV and its sidecar.
pub fn write_environment(field: &EnvironmentField, csv_path: &Path) -> Result<()> {
    let (nx, ny) = field.dims();
    let o = field.origin();
    let sc = GridSidecar {
        origin: [o.x, o.y],
        cell: field.cell(),
        nx,
        ny,
    };
    let sidecar = csv_path.with_extension("json");
    let text = serde_json::to_string_pretty(&sc).map_err(|e| Error::Internal(e.to_string()))?;
    std::fs::write(&sidecar, text + "\n").map_err(io_err(&sidecar))?;
    let mut w = csv::Writer::from_path(csv_path).map_err(|e| Error::Internal(e.to_string()))?;
    for j in 0..ny {
        for i in 0..nx {
            let p = field.node_position(i, j);
            let s = field.node(i, j);
            w.serialize(NodeRow {
                x: p.x,
                y: p.y,
                vx: s.wind.x,
                vy: s.wind.y,
                wx: s.wave.x,
                wy: s.wave.y,
            })
            .map_err(|e| Error::Internal(e.to_string()))?;
        }
    }
    w.flush().map_err(io_err(csv_path))?;
    Ok(())
}
