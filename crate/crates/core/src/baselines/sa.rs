use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::{binary_to_gray, bridge_ordinates, ordinate_to_code, Chromosome, Encoding, Objective, MAX_RESOLUTION};
use crate::outcome::{merge_traces, ConvergenceLog, LogRow, Solution, SolverOutcome, TracePoint};
use crate::penalty::anneal;
use crate::problem::{Evaluation, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaParams {
    pub initial_temperature: f64,
    /// Geometric cooling factor applied after every stage.
    pub cooling: f64,
    pub steps_per_temperature: usize,
    /// Largest code change of a single-ordinate proposal.
    pub step_cells: u64,
    pub resolution: u32,
    pub lambda0: f64,
    /// Per-stage fractional increase of lambda.
    pub anneal_rate: f64,
    /// Evaluations shared by all chains.
    pub max_evaluations: u64,
    /// Independent chains, run one after another.
    pub restarts: usize,
    pub wall_time: Option<f64>,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            initial_temperature: 1.0,
            cooling: 0.95,
            steps_per_temperature: 40,
            step_cells: 8,
            resolution: 10,
            lambda0: 1.0,
            anneal_rate: 0.05,
            max_evaluations: 20_000,
            restarts: 1,
            wall_time: None,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_temperature > 0.0 && self.initial_temperature.is_finite()) {
            return Err(Error::invalid("initial temperature must be positive"));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::invalid("cooling factor must lie in (0, 1)"));
        }
        if self.steps_per_temperature == 0 || self.step_cells == 0 {
            return Err(Error::invalid("steps per temperature and step size must be at least 1"));
        }
        if self.resolution == 0 || self.resolution > MAX_RESOLUTION {
            return Err(Error::invalid(format!("resolution {} out of range", self.resolution)));
        }
        if !(self.lambda0 > 0.0) || !(self.anneal_rate >= 0.0) {
            return Err(Error::invalid("lambda0 must be positive and anneal_rate non-negative"));
        }
        if self.max_evaluations == 0 {
            return Err(Error::invalid("max_evaluations must be at least 1"));
        }
        if self.restarts == 0 || self.restarts as u64 > self.max_evaluations {
            return Err(Error::invalid("restarts must lie between 1 and max_evaluations"));
        }
        Ok(())
    }
}

/// Metropolis rule: downhill moves always pass, uphill moves pass with
/// probability `exp(-delta / temperature)`. `u` is a uniform draw in [0, 1).
pub fn metropolis_accept(delta: f64, temperature: f64, u: f64) -> bool {
    if delta <= 0.0 {
        return true;
    }
    if temperature <= 0.0 {
        return false;
    }
    u < (-delta / temperature).exp()
}

fn chromosome(codes: &[u64], resolution: u32, encoding: Encoding) -> Chromosome {
    let raw: Vec<u64> = match encoding {
        Encoding::Binary => codes.to_vec(),
        Encoding::Gray => codes.iter().map(|&k| binary_to_gray(k)).collect(),
    };
    Chromosome::from_codes(&raw, resolution).expect("codes fit the resolution")
}

/// Simulated annealing over ordinate codes with single-ordinate proposals,
/// scored by the same generalized cost and lambda schedule as the GA. The
/// evaluation budget is split evenly over `restarts` independent chains.
pub fn simulated_annealing(problem: &Problem, params: &SaParams, seed: u64) -> Result<SolverOutcome> {
    params.validate()?;
    let start = Instant::now();
    let deadline = params.wall_time.map(|s| start + Duration::from_secs_f64(s));
    let restarts = params.restarts as u64;
    let mut chains = Vec::with_capacity(params.restarts);
    let mut spent = 0;
    for k in 0..restarts {
        let budget = params.max_evaluations / restarts + u64::from(k < params.max_evaluations % restarts);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let c = chain(problem, params, budget, &mut rng, k as usize, spent, start, deadline);
        spent += c.evaluations;
        chains.push(c);
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
    }

    let mut rows = Vec::new();
    let mut trace = Vec::new();
    let mut generations = 0;
    for c in &mut chains {
        rows.append(&mut c.rows);
        trace.append(&mut c.trace);
        generations += c.stage;
    }
    let best = chains
        .iter()
        .filter_map(|c| c.best.as_ref().map(|b| (c, b)))
        .min_by(|x, y| x.1 .1.cost.total_cmp(&y.1 .1.cost));
    let (reported, fallback) = match best {
        Some((c, (codes, eval, stage))) => (Some(c.solution(problem, codes, eval.clone(), *stage)), None),
        None => {
            let c = chains
                .iter()
                .min_by(|x, y| x.energy.total_cmp(&y.energy))
                .expect("at least one chain runs");
            (None, Some(c.solution(problem, &c.codes, c.current.clone(), c.stage)))
        }
    };
    let lambda_final = reported
        .as_ref()
        .or(fallback.as_ref())
        .map_or(params.lambda0, |s| s.lambda);
    Ok(SolverOutcome {
        solver: "sa".into(),
        best: reported,
        fallback,
        log: ConvergenceLog { rows },
        trace: merge_traces(trace),
        evaluations: spent,
        generations,
        lambda_final,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

struct Chain {
    id: usize,
    codes: Vec<u64>,
    current: Evaluation,
    energy: f64,
    lambda: f64,
    best: Option<(Vec<u64>, Evaluation, u64)>,
    rows: Vec<LogRow>,
    trace: Vec<TracePoint>,
    evaluations: u64,
    stage: u64,
    resolution: u32,
    encoding: Encoding,
}

impl Chain {
    fn solution(&self, problem: &Problem, codes: &[u64], eval: Evaluation, stage: u64) -> Solution {
        let c = chromosome(codes, self.resolution, self.encoding);
        let route = problem.decode(&c);
        Solution::new(problem, Some(c), route, eval, self.lambda, self.id, stage)
    }
}

#[allow(clippy::too_many_arguments)]
fn chain(
    problem: &Problem,
    params: &SaParams,
    budget: u64,
    rng: &mut ChaCha8Rng,
    id: usize,
    offset: u64,
    start: Instant,
    deadline: Option<Instant>,
) -> Chain {
    let m = problem.free_waypoints();
    let res = params.resolution;
    let top = (1u64 << res) - 1;
    let enc = problem.encoding();

    let mut codes: Vec<u64> = bridge_ordinates(m, problem.span(), rng)
        .into_iter()
        .map(|y| ordinate_to_code(y, res, problem.span()))
        .collect();
    let mut current: Evaluation = problem.record(&chromosome(&codes, res, enc));
    let mut lambda = params.lambda0;
    let mut energy = problem.score(&current, lambda);
    let mut evaluations = 1u64;
    let mut temperature = params.initial_temperature;

    let mut best: Option<(Vec<u64>, Evaluation, u64)> = None;
    let mut trace = Vec::new();
    let mut rows = Vec::new();
    let mut stage = 0u64;

    let mut note_feasible = |codes: &[u64], eval: &Evaluation, evaluations: u64, stage: u64| {
        if eval.feasible() && best.as_ref().is_none_or(|b| eval.cost < b.1.cost) {
            best = Some((codes.to_vec(), eval.clone(), stage));
            trace.push(TracePoint {
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                evaluations: offset + evaluations,
                cost: eval.cost,
            });
        }
    };
    note_feasible(&codes, &current, evaluations, stage);

    'outer: while evaluations < budget {
        for _ in 0..params.steps_per_temperature {
            if evaluations >= budget {
                break 'outer;
            }
            let i = rng.gen_range(0..m);
            let step = rng.gen_range(1..=params.step_cells);
            let old = codes[i];
            codes[i] = if rng.gen::<bool>() {
                old.saturating_add(step).min(top)
            } else {
                old.saturating_sub(step)
            };
            if codes[i] == old {
                continue;
            }
            let candidate = problem.record(&chromosome(&codes, res, enc));
            evaluations += 1;
            let e = problem.score(&candidate, lambda);
            if metropolis_accept(e - energy, temperature, rng.gen::<f64>()) {
                current = candidate;
                energy = e;
                note_feasible(&codes, &current, evaluations, stage);
            } else {
                codes[i] = old;
            }
        }
        stage += 1;
        temperature *= params.cooling;
        if params.anneal_rate > 0.0 {
            lambda = anneal(lambda, params.anneal_rate);
            energy = problem.score(&current, lambda);
        }
        let g = problem.generalized(&current, lambda);
        rows.push(LogRow {
            island: id,
            generation: stage,
            lambda,
            best_e: g.value,
            best_s: current.cost,
            best_p: g.penalty,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
    }
    Chain {
        id,
        codes,
        current,
        energy,
        lambda,
        best,
        rows,
        trace,
        evaluations,
        stage,
        resolution: res,
        encoding: enc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::decoding_step;
    use crate::geo_env::ShipModel;

    #[test]
    fn downhill_always_accepted() {
        assert!(metropolis_accept(-1.0, 1e-9, 0.999));
        assert!(metropolis_accept(0.0, 0.0, 0.999));
        assert!(!metropolis_accept(1.0, 0.0, 0.0));
        assert!(metropolis_accept(1.0, 1.0, 0.3));
        assert!(!metropolis_accept(1.0, 1.0, 0.4));
    }

    #[test]
    fn cold_chain_finds_the_axis() {
        let problem = Problem::new(10.0, 3, vec![], None, ShipModel::default(), 1.0).unwrap();
        let params = SaParams {
            initial_temperature: 1e-9,
            resolution: 6,
            step_cells: 4,
            max_evaluations: 3000,
            ..Default::default()
        };
        let out = simulated_annealing(&problem, &params, 9).unwrap();
        let best = out.best.unwrap();
        for y in best.route.free_ordinates() {
            assert!(y.abs() <= decoding_step(10.0, 6));
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let problem = Problem::new(10.0, 4, vec![], None, ShipModel::default(), 1.0).unwrap();
        let p = SaParams {
            max_evaluations: 500,
            ..Default::default()
        };
        let a = simulated_annealing(&problem, &p, 1).unwrap();
        let b = simulated_annealing(&problem, &p, 1).unwrap();
        assert_eq!(a.log.without_timing(), b.log.without_timing());
        assert_eq!(a.evaluations, 500);
    }
}
