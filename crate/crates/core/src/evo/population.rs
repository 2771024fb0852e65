use std::cmp::Ordering;
use std::collections::HashSet;

use rand::Rng;

use super::chromosome::Chromosome;
use crate::error::{Error, Result};

/// Fitness oracle. `record` holds the lambda-independent part of an
/// evaluation so members can be re-scored cheaply when lambda anneals.
pub trait Objective: Sync {
    type Record: Clone + Send + Sync;

    fn record(&self, chromosome: &Chromosome) -> Self::Record;

    /// Lower is better; must be finite.
    fn score(&self, record: &Self::Record, lambda: f64) -> f64;
}

/// Objective from a plain closure; ignores lambda.
pub struct FnObjective<F>(pub F);

impl<F> Objective for FnObjective<F>
where
    F: Fn(&Chromosome) -> f64 + Sync,
{
    type Record = f64;

    fn record(&self, chromosome: &Chromosome) -> f64 {
        (self.0)(chromosome)
    }

    fn score(&self, record: &f64, _lambda: f64) -> f64 {
        *record
    }
}

#[derive(Debug, Clone)]
pub struct Member<R> {
    pub chromosome: Chromosome,
    pub record: R,
    pub fitness: f64,
    /// Insertion sequence number; smaller is older.
    pub birth: u64,
}

/// Fixed-size population kept sorted by ascending fitness.
#[derive(Debug, Clone)]
pub struct Population<R> {
    members: Vec<Member<R>>,
    capacity: usize,
    generation: u64,
    next_birth: u64,
}

fn rank<R>(a: &Member<R>, b: &Member<R>) -> Ordering {
    a.fitness
        .total_cmp(&b.fitness)
        .then(a.birth.cmp(&b.birth))
        .then_with(|| a.chromosome.bits().cmp(b.chromosome.bits()))
}

impl<R: Clone> Population<R> {
    pub fn from_chromosomes<O>(chromosomes: Vec<Chromosome>, objective: &O, lambda: f64) -> Result<Self>
    where
        O: Objective<Record = R>,
    {
        if chromosomes.is_empty() {
            return Err(Error::invalid("population needs at least one member"));
        }
        let len = chromosomes[0].len();
        let res = chromosomes[0].resolution();
        if chromosomes.iter().any(|c| c.len() != len || c.resolution() != res) {
            return Err(Error::invalid("population members must share one shape"));
        }
        let capacity = chromosomes.len();
        let mut pop = Population {
            members: Vec::with_capacity(capacity),
            capacity,
            generation: 0,
            next_birth: 0,
        };
        pop.members = pop.evaluate(chromosomes, objective, lambda);
        pop.members.sort_by(rank);
        Ok(pop)
    }

    /// Uniformly random bit strings.
    pub fn random<O, G>(
        capacity: usize,
        ordinates: usize,
        resolution: u32,
        objective: &O,
        lambda: f64,
        rng: &mut G,
    ) -> Result<Self>
    where
        O: Objective<Record = R>,
        G: Rng + ?Sized,
    {
        let len = ordinates * resolution as usize;
        let chromosomes = (0..capacity)
            .map(|_| Chromosome::new((0..len).map(|_| rng.gen::<bool>()).collect(), resolution))
            .collect::<Result<Vec<_>>>()?;
        Population::from_chromosomes(chromosomes, objective, lambda)
    }

    fn evaluate<O>(&mut self, chromosomes: Vec<Chromosome>, objective: &O, lambda: f64) -> Vec<Member<R>>
    where
        O: Objective<Record = R>,
    {
        chromosomes
            .into_iter()
            .map(|chromosome| {
                let record = objective.record(&chromosome);
                let fitness = objective.score(&record, lambda);
                let birth = self.next_birth;
                self.next_birth += 1;
                Member {
                    chromosome,
                    record,
                    fitness,
                    birth,
                }
            })
            .collect()
    }

    pub fn members(&self) -> &[Member<R>] {
        &self.members
    }

    pub fn best(&self) -> &Member<R> {
        &self.members[0]
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn resolution(&self) -> u32 {
        self.members[0].chromosome.resolution()
    }

    pub fn chromosome_len(&self) -> usize {
        self.members[0].chromosome.len()
    }

    /// Re-score every member at a new lambda.
    pub fn rescore<O>(&mut self, objective: &O, lambda: f64)
    where
        O: Objective<Record = R>,
    {
        for m in &mut self.members {
            m.fitness = objective.score(&m.record, lambda);
        }
        self.members.sort_by(rank);
    }

    /// Best `ceil(fraction * size)` members (at least one).
    pub fn top(&self, fraction: f64) -> &[Member<R>] {
        let k = ((fraction * self.members.len() as f64).ceil() as usize).clamp(1, self.members.len());
        &self.members[..k]
    }

    /// Steady-state merge of parents with GA and EDA offspring: all
    /// candidates are ranked by fitness (older first, then bit order on
    /// ties) and the best `capacity` distinct chromosomes survive.
    pub fn next_generation<O>(
        mut self,
        ga_offspring: Vec<Chromosome>,
        eda_offspring: Vec<Chromosome>,
        objective: &O,
        lambda: f64,
    ) -> Self
    where
        O: Objective<Record = R>,
    {
        self.generation += 1;
        self.merge(ga_offspring, eda_offspring, objective, lambda);
        self
    }

    /// In-place elitist merge without advancing the generation counter.
    pub fn merge<O>(
        &mut self,
        ga_offspring: Vec<Chromosome>,
        eda_offspring: Vec<Chromosome>,
        objective: &O,
        lambda: f64,
    ) where
        O: Objective<Record = R>,
    {
        if ga_offspring.is_empty() && eda_offspring.is_empty() {
            return;
        }
        let shape = (self.chromosome_len(), self.resolution());
        let incoming: Vec<Chromosome> = ga_offspring
            .into_iter()
            .chain(eda_offspring)
            .filter(|c| (c.len(), c.resolution()) == shape)
            .collect();
        let fresh = self.evaluate(incoming, objective, lambda);
        let mut pool = std::mem::take(&mut self.members);
        pool.extend(fresh);
        pool.sort_by(rank);

        let mut seen = HashSet::with_capacity(pool.len());
        let mut kept = Vec::with_capacity(self.capacity);
        let mut spare = Vec::new();
        for m in pool {
            if kept.len() == self.capacity {
                break;
            }
            if seen.insert(m.chromosome.bits().to_vec()) {
                kept.push(m);
            } else if spare.len() < self.capacity {
                spare.push(m);
            }
        }
        // too few distinct candidates: pad with the best duplicates
        if kept.len() < self.capacity {
            let missing = self.capacity - kept.len();
            kept.extend(spare.into_iter().take(missing));
            kept.sort_by(rank);
        }
        self.members = kept;
    }

    pub(crate) fn advance_generation(&mut self) {
        self.generation += 1;
    }
}
