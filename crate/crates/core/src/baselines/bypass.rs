use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::{
    decoding_step, encode_ordinates, hybrid_generation, Chromosome, GaParams, HybridParams, Objective, Population,
};
use crate::geo_env::{uniform_points, Route};
use crate::outcome::{merge_traces, ConvergenceLog, LogRow, Solution, SolverOutcome, TracePoint};
use crate::penalty::Obstacle;
use crate::problem::{Evaluation, Problem};

pub const DEFAULT_BYPASS_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

/// One side assignment for the obstacles between the endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct BypassClass {
    /// Indices into the problem's obstacle list, ordered by x.
    pub obstacles: Vec<usize>,
    pub sides: Vec<Side>,
    pub seed: Route,
    /// False when the chosen sides squeeze some waypoint from both ways.
    pub consistent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BypassParams {
    pub cap: usize,
    pub clearance: f64,
    pub resolution: u32,
    pub population_size: usize,
    pub generations: u64,
    /// Initial members are the seed jittered by up to this many codes.
    pub spread_cells: u64,
}

impl Default for BypassParams {
    fn default() -> Self {
        BypassParams {
            cap: DEFAULT_BYPASS_CAP,
            clearance: 0.0,
            resolution: 8,
            population_size: 24,
            generations: 60,
            spread_cells: 3,
        }
    }
}

/// Obstacles whose bounding box meets the open search rectangle, sorted by
/// their x-extent.
pub fn obstacles_between(obstacles: &[Obstacle], span: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = obstacles
        .iter()
        .enumerate()
        .filter(|(_, o)| {
            let b = o.bbox();
            b.max.x > 0.0 && b.min.x < span && b.max.y > -span && b.min.y < span
        })
        .map(|(i, _)| i)
        .collect();
    idx.sort_by(|&a, &b| {
        let (ba, bb) = (obstacles[a].bbox(), obstacles[b].bbox());
        ba.min
            .x
            .total_cmp(&bb.min.x)
            .then(ba.max.x.total_cmp(&bb.max.x))
            .then(a.cmp(&b))
    });
    idx
}

fn seed_route(problem: &Problem, between: &[usize], sides: &[Side], margin: f64) -> (Route, bool) {
    let span = problem.span();
    let m = problem.free_waypoints();
    let width = span / (m + 1) as f64;
    let mut lo = vec![-span; m];
    let mut hi = vec![span; m];
    for (&k, &side) in between.iter().zip(sides) {
        let b = problem.obstacles()[k].bbox();
        for i in 0..m {
            let x = (i + 1) as f64 * width;
            if x < b.min.x - width || x > b.max.x + width {
                continue;
            }
            match side {
                Side::Above => lo[i] = lo[i].max(b.max.y + margin),
                Side::Below => hi[i] = hi[i].min(b.min.y - margin),
            }
        }
    }
    let mut consistent = true;
    let ys: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| {
            let y = if l <= h {
                0.0f64.clamp(l, h)
            } else {
                consistent = false;
                0.5 * (l + h)
            };
            y.clamp(-span, span)
        })
        .collect();
    let route = Route::new(uniform_points(span, &ys), span).expect("seed ordinates are clamped to the span");
    (route, consistent)
}

/// All `2^N` above/below assignments for the `N` obstacles between the
/// endpoints, each with a seed route through its corridor.
pub fn enumerate_bypasses(problem: &Problem, params: &BypassParams) -> Result<Vec<BypassClass>> {
    let between = obstacles_between(problem.obstacles(), problem.span());
    let n = between.len();
    if n > params.cap {
        return Err(Error::TooManyObstacles {
            count: n,
            cap: params.cap,
        });
    }
    let margin = params.clearance + decoding_step(problem.span(), params.resolution);
    Ok((0u64..1 << n)
        .map(|mask| {
            let sides: Vec<Side> = (0..n)
                .map(|j| {
                    if mask >> (n - 1 - j) & 1 == 0 {
                        Side::Above
                    } else {
                        Side::Below
                    }
                })
                .collect();
            let (seed, consistent) = seed_route(problem, &between, &sides, margin);
            BypassClass {
                obstacles: between.clone(),
                sides,
                seed,
                consistent,
            }
        })
        .collect())
}

/// Infeasible candidates score infinity and are culled by elitism.
struct DeathPenalty<'a>(&'a Problem);

impl Objective for DeathPenalty<'_> {
    type Record = Evaluation;

    fn record(&self, c: &Chromosome) -> Evaluation {
        self.0.record(c)
    }

    fn score(&self, record: &Evaluation, _lambda: f64) -> f64 {
        if record.feasible() {
            record.cost
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone)]
pub struct BypassResult {
    pub outcome: SolverOutcome,
    /// Best feasible solution of each class, in class order.
    pub class_best: Vec<Option<Solution>>,
}

struct ClassRun {
    best: Option<Solution>,
    rows: Vec<LogRow>,
    trace: Vec<TracePoint>,
    evaluations: u64,
}

fn solve_class(
    problem: &Problem,
    class: &BypassClass,
    id: usize,
    params: &BypassParams,
    seed: u64,
    start: Instant,
) -> Result<ClassRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let res = params.resolution;
    let top = (1u64 << res) - 1;
    let seed_chrom = encode_ordinates(&class.seed.free_ordinates(), problem.span(), res, problem.encoding())?;
    let base = seed_chrom.codes(problem.encoding());
    let mut chromosomes = vec![seed_chrom];
    while chromosomes.len() < params.population_size {
        let ys: Vec<f64> = base
            .iter()
            .map(|&k| {
                let s = params.spread_cells as i64;
                let k = (k as i64 + rng.gen_range(-s..=s)).clamp(0, top as i64) as u64;
                crate::evo::code_to_ordinate(k, res, problem.span())
            })
            .collect();
        chromosomes.push(encode_ordinates(&ys, problem.span(), res, problem.encoding())?);
    }
    let objective = DeathPenalty(problem);
    let mut pop = Population::from_chromosomes(chromosomes, &objective, 0.0)?;
    let hybrid = HybridParams {
        ga: GaParams::default(),
        ga_share: 1.0,
        ..Default::default()
    };
    let mut evaluations = pop.capacity() as u64;
    let mut rows = Vec::new();
    let mut trace = Vec::new();
    let mut best_cost = f64::INFINITY;
    let mut observe = |pop: &Population<Evaluation>, evaluations: u64, rows: &mut Vec<LogRow>| {
        let b = pop.best();
        if b.fitness < best_cost {
            best_cost = b.fitness;
            trace.push(TracePoint {
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                evaluations,
                cost: b.fitness,
            });
        }
        rows.push(LogRow {
            island: id,
            generation: pop.generation(),
            lambda: 0.0,
            best_e: b.fitness,
            best_s: b.record.cost,
            best_p: 0.0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    };
    observe(&pop, evaluations, &mut rows);
    for _ in 0..params.generations {
        hybrid_generation(&mut pop, &objective, 0.0, &hybrid, &mut rng);
        evaluations += pop.capacity() as u64;
        observe(&pop, evaluations, &mut rows);
    }
    let b = pop.best();
    let best = b.record.feasible().then(|| {
        Solution::new(
            problem,
            Some(b.chromosome.clone()),
            problem.decode(&b.chromosome),
            b.record.clone(),
            0.0,
            id,
            pop.generation(),
        )
    });
    Ok(ClassRun {
        best,
        rows,
        trace,
        evaluations,
    })
}

/// Evolve a death-penalty GA inside every class and keep the cheapest
/// feasible route overall.
pub fn bypass_solver(
    problem: &Problem,
    classes: &[BypassClass],
    params: &BypassParams,
    seed: u64,
) -> Result<BypassResult> {
    if classes.is_empty() {
        return Err(Error::invalid("bypass solver needs at least one class"));
    }
    if params.population_size < 2 {
        return Err(Error::invalid("bypass population size must be at least 2"));
    }
    let start = Instant::now();
    let runs = classes
        .par_iter()
        .enumerate()
        .map(|(id, class)| solve_class(problem, class, id, params, seed, start))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut trace = Vec::new();
    let mut evaluations = 0;
    let mut class_best = Vec::with_capacity(runs.len());
    for run in runs {
        rows.extend(run.rows);
        trace.extend(run.trace);
        evaluations += run.evaluations;
        class_best.push(run.best);
    }
    let best = class_best
        .iter()
        .flatten()
        .min_by(|a, b| a.cost().total_cmp(&b.cost()).then(a.source.cmp(&b.source)))
        .cloned();
    Ok(BypassResult {
        outcome: SolverOutcome {
            solver: "bypass".into(),
            best,
            fallback: None,
            log: ConvergenceLog { rows },
            trace: merge_traces(trace),
            evaluations,
            generations: params.generations,
            lambda_final: 0.0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        class_best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo_env::ShipModel;

    fn problem(obstacles: Vec<Obstacle>) -> Problem {
        Problem::new(10.0, 9, obstacles, None, ShipModel::default(), 1.0).unwrap()
    }

    #[test]
    fn no_obstacles_one_straight_class() {
        let classes = enumerate_bypasses(&problem(vec![]), &BypassParams::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes[0].seed.free_ordinates().iter().all(|&y| y == 0.0));
    }

    #[test]
    fn three_obstacles_eight_classes() {
        let obs = (0..3)
            .map(|i| Obstacle::rect(2.0 + 2.0 * i as f64, -0.5, 2.8 + 2.0 * i as f64, 0.5).unwrap())
            .collect();
        let classes = enumerate_bypasses(&problem(obs), &BypassParams::default()).unwrap();
        assert_eq!(classes.len(), 8);
        // all-above and all-below never squeeze a waypoint
        assert!(classes[0].consistent && classes[7].consistent);
    }

    #[test]
    fn cap_refuses() {
        let obs: Vec<Obstacle> = (0..3)
            .map(|i| Obstacle::rect(2.0 + 2.0 * i as f64, -0.5, 2.8 + 2.0 * i as f64, 0.5).unwrap())
            .collect();
        let params = BypassParams {
            cap: 2,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_bypasses(&problem(obs), &params),
            Err(Error::TooManyObstacles { count: 3, cap: 2 })
        ));
    }

    #[test]
    fn seeds_are_feasible_for_separated_boxes() {
        let obs = vec![Obstacle::rect(3.0, -1.0, 4.0, 1.0).unwrap()];
        let p = problem(obs);
        for class in enumerate_bypasses(&p, &BypassParams::default()).unwrap() {
            assert!(p.evaluate(&class.seed).report.h.iter().all(|&h| h == 0.0));
        }
    }

    #[test]
    fn symmetric_obstacle_gives_mirror_costs() {
        let p = problem(vec![Obstacle::rect(4.0, -1.0, 6.0, 1.0).unwrap()]);
        let params = BypassParams::default();
        let classes = enumerate_bypasses(&p, &params).unwrap();
        let r = bypass_solver(&p, &classes, &params, 4).unwrap();
        let costs: Vec<f64> = r.class_best.iter().map(|s| s.as_ref().unwrap().cost()).collect();
        assert!((costs[0] - costs[1]).abs() / costs[0] < 0.02);
        assert!(r.outcome.is_feasible());
    }
}
