use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crossbeam::channel::{unbounded, Receiver, Sender};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::island::Island;
use super::migration::MigrationMessage;
use super::network::IslandNetwork;
use crate::error::{Error, Result};
use crate::evo::HybridParams;
use crate::outcome::{merge_traces, ConvergenceLog, Solution, SolverOutcome};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    /// Islands synchronize at every migration epoch; results do not depend
    /// on the worker count.
    #[default]
    Deterministic,
    /// Islands progress independently and poll their inboxes.
    FreeRunning,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Termination {
    pub max_generations: u64,
    /// Stop after this many generations without improving the best
    /// feasible cost, counted once a population's best member is feasible.
    pub plateau: Option<u64>,
    /// Wall-clock limit in seconds. Breaks determinism when it triggers.
    pub wall_time: Option<f64>,
}

impl Default for Termination {
    fn default() -> Self {
        Termination {
            max_generations: 500,
            plateau: Some(30),
            wall_time: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub hybrid: HybridParams,
    pub immigrant_fraction: f64,
    pub termination: Termination,
    pub seed: u64,
    pub workers: usize,
    pub mode: RunMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            hybrid: HybridParams::default(),
            immigrant_fraction: 0.25,
            termination: Termination::default(),
            seed: 0,
            workers: 1,
            mode: RunMode::Deterministic,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.hybrid.validate()?;
        if !(self.immigrant_fraction > 0.0 && self.immigrant_fraction < 1.0) {
            return Err(Error::invalid("immigrant_fraction must lie in (0, 1)"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be at least 1"));
        }
        if let Some(t) = self.termination.wall_time {
            if !(t > 0.0) {
                return Err(Error::invalid("wall_time must be positive"));
            }
        }
        Ok(())
    }
}

/// One delivered migration, kept for auditing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MigrationRecord {
    pub source: usize,
    pub target: usize,
    pub generation: u64,
    pub source_resolution: u32,
    pub target_resolution: u32,
    pub payload_len: usize,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcome: SolverOutcome,
    pub migrations: Vec<MigrationRecord>,
}

/// Evolve every island of `network` on `problem` and return the best
/// feasible route found, or the least-penalized candidate if none was.
pub fn run(network: &IslandNetwork, problem: &Problem, config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let start = Instant::now();
    let islands = network
        .islands()
        .iter()
        .enumerate()
        .map(|(id, cfg)| Island::new(id, *cfg, problem, config.seed, start))
        .collect::<Result<Vec<_>>>()?;
    let (islands, migrations) = match config.mode {
        RunMode::Deterministic => run_synchronized(network, problem, config, islands, start)?,
        RunMode::FreeRunning => run_free(network, problem, config, islands, start)?,
    };
    Ok(RunResult {
        outcome: summarize(problem, islands, start),
        migrations,
    })
}

fn deadline(t: &Termination, start: Instant) -> Option<Instant> {
    t.wall_time.map(|s| start + Duration::from_secs_f64(s))
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Generation of the last improvement of the global feasible best.
fn plateau_origin(islands: &[Island]) -> Option<u64> {
    let settled = islands.iter().filter_map(|i| i.settled).min()?;
    let last = islands
        .iter()
        .filter_map(|i| i.best.as_ref())
        .min_by(|a, b| {
            a.evaluation
                .cost
                .total_cmp(&b.evaluation.cost)
                .then(a.generation.cmp(&b.generation))
        })
        .map(|b| b.generation)?;
    Some(settled.max(last))
}

fn deliver(
    network: &IslandNetwork,
    island: &mut Island,
    msg: &MigrationMessage,
    config: &RunConfig,
    problem: &Problem,
    start: Instant,
) -> Result<MigrationRecord> {
    let source_resolution = network.islands()[msg.source].resolution;
    let record = MigrationRecord {
        source: msg.source,
        target: island.id,
        generation: msg.generation,
        source_resolution,
        target_resolution: island.config.resolution,
        payload_len: msg.payload_len(),
    };
    island.receive(msg, config.immigrant_fraction, problem, start)?;
    Ok(record)
}

fn run_synchronized(
    network: &IslandNetwork,
    problem: &Problem,
    config: &RunConfig,
    mut islands: Vec<Island>,
    start: Instant,
) -> Result<(Vec<Island>, Vec<MigrationRecord>)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let epoch = network
        .islands()
        .iter()
        .map(|i| i.migration_interval)
        .min()
        .unwrap_or(1);
    let term = config.termination;
    let deadline = deadline(&term, start);
    let mut migrations = Vec::new();
    let mut generation = 0u64;

    while generation < term.max_generations {
        let steps = epoch.min(term.max_generations - generation);
        pool.install(|| {
            islands.par_iter_mut().for_each(|island| {
                for _ in 0..steps {
                    island.step(problem, &config.hybrid, start);
                }
            })
        });
        generation += steps;

        let outbox: Vec<MigrationMessage> = islands
            .iter()
            .filter(|i| {
                generation.is_multiple_of(i.config.migration_interval) && network.out_edges(i.id).next().is_some()
            })
            .map(|i| i.publish(config.hybrid.eda_selection))
            .collect();
        for msg in &outbox {
            for target in network.out_edges(msg.source) {
                migrations.push(deliver(network, &mut islands[target], msg, config, problem, start)?);
            }
        }

        if let (Some(limit), Some(last)) = (term.plateau, plateau_origin(&islands)) {
            if generation - last >= limit {
                break;
            }
        }
        if expired(deadline) {
            break;
        }
    }
    Ok((islands, migrations))
}

fn run_free(
    network: &IslandNetwork,
    problem: &Problem,
    config: &RunConfig,
    islands: Vec<Island>,
    start: Instant,
) -> Result<(Vec<Island>, Vec<MigrationRecord>)> {
    let n = islands.len();
    let (senders, receivers): (Vec<Sender<MigrationMessage>>, Vec<Receiver<MigrationMessage>>) =
        (0..n).map(|_| unbounded()).unzip();
    let term = config.termination;
    let deadline = deadline(&term, start);
    let stop = AtomicBool::new(false);

    let mut buckets: Vec<Vec<Island>> = (0..config.workers.min(n)).map(|_| Vec::new()).collect();
    let workers = buckets.len();
    for island in islands {
        let w = island.id % workers;
        buckets[w].push(island);
    }

    let results: Vec<Result<(Vec<Island>, Vec<MigrationRecord>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = buckets
            .into_iter()
            .map(|mut own| {
                let senders = &senders;
                let receivers = &receivers;
                let stop = &stop;
                scope.spawn(move || -> Result<(Vec<Island>, Vec<MigrationRecord>)> {
                    let mut log = Vec::new();
                    let mut done = vec![false; own.len()];
                    while done.iter().any(|d| !d) {
                        if stop.load(Ordering::Relaxed) {
                            break;
                        }
                        for (k, island) in own.iter_mut().enumerate() {
                            if done[k] {
                                continue;
                            }
                            island.step(problem, &config.hybrid, start);
                            let g = island.generation();
                            if g % island.config.migration_interval == 0 {
                                let targets: Vec<usize> = network.out_edges(island.id).collect();
                                if !targets.is_empty() {
                                    let msg = island.publish(config.hybrid.eda_selection);
                                    for t in targets {
                                        // receivers outlive every sender use
                                        let _ = senders[t].send(msg.clone());
                                    }
                                }
                            }
                            while let Ok(msg) = receivers[island.id].try_recv() {
                                log.push(deliver(network, island, &msg, config, problem, start)?);
                            }
                            let plateaued = match (term.plateau, island.plateau_origin()) {
                                (Some(limit), Some(last)) => g - last >= limit,
                                _ => false,
                            };
                            if g >= term.max_generations || plateaued {
                                done[k] = true;
                            }
                            if expired(deadline) {
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                    Ok((own, log))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Internal("island worker panicked".into())))
            })
            .collect()
    });

    let mut islands = Vec::with_capacity(n);
    let mut migrations = Vec::new();
    for r in results {
        let (own, log) = r?;
        islands.extend(own);
        migrations.extend(log);
    }
    islands.sort_by_key(|i| i.id);
    Ok((islands, migrations))
}

fn summarize(problem: &Problem, islands: Vec<Island>, start: Instant) -> SolverOutcome {
    let best = islands
        .iter()
        .filter_map(|i| i.feasible_solution(problem))
        .min_by(|a, b| a.cost().total_cmp(&b.cost()).then(a.source.cmp(&b.source)));
    let fallback = if best.is_none() {
        islands
            .iter()
            .map(|i| i.best_member(problem))
            .min_by(|a, b| a.penalty.total_cmp(&b.penalty).then(a.cost().total_cmp(&b.cost())))
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut trace = Vec::new();
    for island in &islands {
        rows.extend(island.rows.iter().cloned());
        trace.extend(island.trace.iter().copied());
    }
    let lambda_final = best
        .as_ref()
        .or(fallback.as_ref())
        .map_or(0.0, |s: &Solution| islands[s.source].lambda);
    SolverOutcome {
        solver: "ga-eda".into(),
        best,
        fallback,
        log: ConvergenceLog { rows },
        trace: merge_traces(trace),
        evaluations: islands.iter().map(|i| i.evaluations).sum(),
        generations: islands.iter().map(|i| i.generation()).max().unwrap_or(0),
        lambda_final,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
