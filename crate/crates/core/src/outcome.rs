//! Result types shared by the archipelago and the baseline solvers.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::Chromosome;
use crate::geo_env::Route;
use crate::problem::{Evaluation, Problem};

#[derive(Debug, Clone)]
pub struct Solution {
    pub chromosome: Option<Chromosome>,
    pub route: Route,
    pub evaluation: Evaluation,
    /// Penalty `P` at `lambda`.
    pub penalty: f64,
    /// Generalized cost `E` at `lambda`.
    pub value: f64,
    pub lambda: f64,
    /// Island (or class / restart) that produced it.
    pub source: usize,
    pub generation: u64,
}

impl Solution {
    pub fn new(
        problem: &Problem,
        chromosome: Option<Chromosome>,
        route: Route,
        evaluation: Evaluation,
        lambda: f64,
        source: usize,
        generation: u64,
    ) -> Self {
        let g = problem.generalized(&evaluation, lambda);
        Solution {
            chromosome,
            route,
            evaluation,
            penalty: g.penalty,
            value: g.value,
            lambda,
            source,
            generation,
        }
    }

    pub fn cost(&self) -> f64 {
        self.evaluation.cost
    }

    pub fn feasible(&self) -> bool {
        self.evaluation.feasible()
    }
}

/// One row of the convergence log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub island: usize,
    pub generation: u64,
    pub lambda: f64,
    #[serde(rename = "best_E")]
    pub best_e: f64,
    #[serde(rename = "best_S")]
    pub best_s: f64,
    #[serde(rename = "best_P")]
    pub best_p: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceLog {
    pub rows: Vec<LogRow>,
}

pub const LOG_HEADER: &str = "island,generation,lambda,best_E,best_S,best_P,wall_ms";

impl ConvergenceLog {
    /// Rows with the timing column removed; equal across worker counts in
    /// deterministic mode.
    pub fn without_timing(&self) -> Vec<LogRow> {
        self.rows
            .iter()
            .map(|r| LogRow {
                wall_ms: 0.0,
                ..r.clone()
            })
            .collect()
    }

    pub fn island(&self, island: usize) -> impl Iterator<Item = &LogRow> {
        self.rows.iter().filter(move |r| r.island == island)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Internal(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> std::result::Result<Self, csv::Error> {
        let mut r = csv::Reader::from_reader(input);
        let rows = r.deserialize().collect::<std::result::Result<Vec<LogRow>, _>>()?;
        Ok(ConvergenceLog { rows })
    }
}

/// A point where the global best feasible cost improved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub wall_ms: f64,
    /// Evaluations spent so far by the island or solver that reported it.
    pub evaluations: u64,
    pub cost: f64,
}

/// Running minimum over per-source improvement events.
pub fn merge_traces(mut events: Vec<TracePoint>) -> Vec<TracePoint> {
    events.sort_by(|a, b| a.wall_ms.total_cmp(&b.wall_ms).then(a.evaluations.cmp(&b.evaluations)));
    let mut best = f64::INFINITY;
    events
        .into_iter()
        .filter(|e| {
            if e.cost < best {
                best = e.cost;
                true
            } else {
                false
            }
        })
        .collect()
}

/// First trace point at or below `threshold`.
pub fn time_to_threshold(trace: &[TracePoint], threshold: f64) -> Option<TracePoint> {
    trace.iter().copied().find(|t| t.cost <= threshold)
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub solver: String,
    /// Best feasible route found, by physical cost `S`.
    pub best: Option<Solution>,
    /// Lowest-penalty candidate, reported when nothing feasible was found.
    pub fallback: Option<Solution>,
    pub log: ConvergenceLog,
    pub trace: Vec<TracePoint>,
    pub evaluations: u64,
    pub generations: u64,
    pub lambda_final: f64,
    pub wall_ms: f64,
}

impl SolverOutcome {
    pub fn is_feasible(&self) -> bool {
        self.best.is_some()
    }

    /// The feasible best, or the fallback.
    pub fn reported(&self) -> Option<&Solution> {
        self.best.as_ref().or(self.fallback.as_ref())
    }
}
