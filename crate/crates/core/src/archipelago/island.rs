use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::migration::{incorporate, MigrationMessage};
use super::network::IslandConfig;
use crate::error::Result;
use crate::evo::{bridge_chromosomes, elite_model, hybrid_generation, Chromosome, HybridParams, Population};
use crate::outcome::{LogRow, Solution, TracePoint};
use crate::penalty::anneal;
use crate::problem::{Evaluation, Problem};

#[derive(Debug, Clone)]
pub(crate) struct FeasibleBest {
    pub chromosome: Chromosome,
    pub evaluation: Evaluation,
    pub generation: u64,
}

/// One population with its own annealing schedule and random stream.
pub(crate) struct Island {
    pub id: usize,
    pub config: IslandConfig,
    pub pop: Population<Evaluation>,
    pub lambda: f64,
    rng: ChaCha8Rng,
    pub evaluations: u64,
    pub best: Option<FeasibleBest>,
    pub rows: Vec<LogRow>,
    pub trace: Vec<TracePoint>,
    /// First generation whose best member (by `E`) was feasible.
    pub settled: Option<u64>,
}

impl Island {
    pub fn new(id: usize, config: IslandConfig, problem: &Problem, seed: u64, start: Instant) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id as u64);
        let seeds = bridge_chromosomes(
            config.population_size,
            problem.free_waypoints(),
            config.resolution,
            problem.span(),
            problem.encoding(),
            &mut rng,
        );
        let pop = Population::from_chromosomes(seeds, problem, config.lambda0)?;
        let mut island = Island {
            id,
            config,
            pop,
            lambda: config.lambda0,
            rng,
            evaluations: config.population_size as u64,
            best: None,
            rows: Vec::new(),
            trace: Vec::new(),
            settled: None,
        };
        island.observe(problem, start);
        Ok(island)
    }

    pub fn generation(&self) -> u64 {
        self.pop.generation()
    }

    /// Anneal, re-score, breed one hybrid generation, then log.
    pub fn step(&mut self, problem: &Problem, hybrid: &HybridParams, start: Instant) {
        if self.config.anneal_rate > 0.0 {
            self.lambda = anneal(self.lambda, self.config.anneal_rate).min(f64::MAX);
            self.pop.rescore(problem, self.lambda);
        }
        let (n_ga, n_eda) = hybrid.split(self.pop.capacity());
        hybrid_generation(&mut self.pop, problem, self.lambda, hybrid, &mut self.rng);
        self.evaluations += (n_ga + n_eda) as u64;
        self.observe(problem, start);
    }

    pub fn publish(&self, selection: f64) -> MigrationMessage {
        MigrationMessage {
            source: self.id,
            generation: self.generation(),
            model: elite_model(&self.pop, selection),
        }
    }

    pub fn receive(&mut self, msg: &MigrationMessage, fraction: f64, problem: &Problem, start: Instant) -> Result<()> {
        let n = incorporate(&mut self.pop, msg, fraction, problem, self.lambda, &mut self.rng)?;
        self.evaluations += n as u64;
        self.track_feasible(start);
        Ok(())
    }

    fn observe(&mut self, problem: &Problem, start: Instant) {
        self.track_feasible(start);
        let best = self.pop.best();
        if self.settled.is_none() && best.record.feasible() {
            self.settled = Some(self.generation());
        }
        let g = problem.generalized(&best.record, self.lambda);
        self.rows.push(LogRow {
            island: self.id,
            generation: self.generation(),
            lambda: self.lambda,
            best_e: best.fitness,
            best_s: best.record.cost,
            best_p: g.penalty,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }

    fn track_feasible(&mut self, start: Instant) {
        let incumbent = self.best.as_ref().map_or(f64::INFINITY, |b| b.evaluation.cost);
        let candidate = self
            .pop
            .members()
            .iter()
            .filter(|m| m.record.feasible() && m.record.cost < incumbent)
            .min_by(|a, b| a.record.cost.total_cmp(&b.record.cost));
        if let Some(m) = candidate {
            self.best = Some(FeasibleBest {
                chromosome: m.chromosome.clone(),
                evaluation: m.record.clone(),
                generation: self.pop.generation(),
            });
            self.trace.push(TracePoint {
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                evaluations: self.evaluations,
                cost: m.record.cost,
            });
        }
    }

    pub fn last_improvement(&self) -> Option<u64> {
        self.best.as_ref().map(|b| b.generation)
    }

    /// Generation the plateau counter runs from: the last feasible-best
    /// improvement, but no earlier than the population settling on a
    /// feasible best member.
    pub fn plateau_origin(&self) -> Option<u64> {
        Some(self.settled?.max(self.last_improvement()?))
    }

    pub fn feasible_solution(&self, problem: &Problem) -> Option<Solution> {
        self.best.as_ref().map(|b| {
            Solution::new(
                problem,
                Some(b.chromosome.clone()),
                problem.decode(&b.chromosome),
                b.evaluation.clone(),
                self.lambda,
                self.id,
                b.generation,
            )
        })
    }

    /// Best member at the current lambda, feasible or not.
    pub fn best_member(&self, problem: &Problem) -> Solution {
        let m = self.pop.best();
        Solution::new(
            problem,
            Some(m.chromosome.clone()),
            problem.decode(&m.chromosome),
            m.record.clone(),
            self.lambda,
            self.id,
            self.generation(),
        )
    }
}
