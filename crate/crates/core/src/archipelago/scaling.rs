use serde::{Deserialize, Serialize};

use super::network::IslandNetwork;
use super::run::{run, RunConfig, RunMode};
use crate::error::{Error, Result};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub workers: usize,
    pub wall_ms: f64,
    pub speedup: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Run the same free-running workload at each worker count. Speedup is
/// relative to the smallest worker count listed, using median wall-times.
pub fn thread_scaling(
    network: &IslandNetwork,
    problem: &Problem,
    config: &RunConfig,
    workers: &[usize],
    repeats: usize,
) -> Result<Vec<ScalingRow>> {
    if workers.is_empty() || repeats == 0 {
        return Err(Error::invalid("need at least one worker count and one repeat"));
    }
    let mut timings = Vec::with_capacity(workers.len());
    for &w in workers {
        let cfg = RunConfig {
            workers: w,
            mode: RunMode::FreeRunning,
            ..*config
        };
        let mut walls = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            walls.push(run(network, problem, &cfg)?.outcome.wall_ms);
        }
        timings.push((w, median(walls)));
    }
    let base = timings.iter().min_by_key(|t| t.0).map(|t| t.1).unwrap_or(1.0);
    Ok(timings
        .into_iter()
        .map(|(workers, wall_ms)| ScalingRow {
            workers,
            wall_ms,
            speedup: base / wall_ms,
        })
        .collect())
}
