//! Binary-encoded population machinery: decoding, GA operators, the
//! univariate EDA model, and the steady-state hybrid generation step.

mod chromosome;
mod eda;
mod ga;
mod init;
mod population;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use chromosome::{
    binary_to_gray, cell_area, code_to_ordinate, decode, decode_ordinates, decoding_step, encode_ordinates,
    gray_to_binary, ordinate_to_code, Chromosome, Encoding, MAX_RESOLUTION,
};
pub use eda::{eda_fit, eda_sample, DistributionModel};
pub use ga::{ga_offspring, mutate, single_point_crossover, tournament, GaParams};
pub use init::{bridge_chromosomes, bridge_ordinates};
pub use population::{FnObjective, Member, Objective, Population};

use crate::error::{Error, Result};

/// Offspring mix for one hybrid generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridParams {
    pub ga: GaParams,
    /// Share of each generation's offspring produced by the GA.
    pub ga_share: f64,
    /// Truncation fraction of the population used to fit the EDA model.
    pub eda_selection: f64,
    /// Offspring per generation as a multiple of the population size.
    pub offspring_ratio: f64,
}

impl Default for HybridParams {
    fn default() -> Self {
        HybridParams {
            ga: GaParams::default(),
            ga_share: 0.5,
            eda_selection: 0.3,
            offspring_ratio: 1.0,
        }
    }
}

impl HybridParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ga_share) {
            return Err(Error::invalid("ga_share must lie in [0, 1]"));
        }
        if !(self.eda_selection > 0.0 && self.eda_selection <= 1.0) {
            return Err(Error::invalid("eda_selection must lie in (0, 1]"));
        }
        if !(self.offspring_ratio > 0.0) {
            return Err(Error::invalid("offspring_ratio must be positive"));
        }
        if !(0.0..=1.0).contains(&self.ga.crossover_prob) {
            return Err(Error::invalid("crossover_prob must lie in [0, 1]"));
        }
        if let Some(p) = self.ga.mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid("mutation_prob must lie in [0, 1]"));
            }
        }
        if self.ga.tournament_size == 0 {
            return Err(Error::invalid("tournament_size must be at least 1"));
        }
        Ok(())
    }

    pub fn split(&self, population: usize) -> (usize, usize) {
        let total = (self.offspring_ratio * population as f64).round().max(1.0) as usize;
        let ga = (self.ga_share * total as f64).round() as usize;
        (ga, total - ga)
    }
}

/// The EDA model of a population's elite.
pub fn elite_model<R: Clone>(pop: &Population<R>, selection: f64) -> DistributionModel {
    eda_fit(pop.top(selection).iter().map(|m| &m.chromosome)).expect("population members share one shape")
}

/// One hybrid GA-EDA generation: GA offspring from tournament parents, EDA
/// offspring from the elite model, then the elitist steady-state merge.
pub fn hybrid_generation<R, O, G>(
    pop: &mut Population<R>,
    objective: &O,
    lambda: f64,
    params: &HybridParams,
    rng: &mut G,
) where
    R: Clone,
    O: Objective<Record = R>,
    G: Rng + ?Sized,
{
    let (n_ga, n_eda) = params.split(pop.capacity());
    let ga = ga_offspring(pop.members(), n_ga, &params.ga, rng);
    let eda = if n_eda > 0 {
        eda_sample(&elite_model(pop, params.eda_selection), n_eda, rng)
    } else {
        Vec::new()
    };
    pop.advance_generation();
    pop.merge(ga, eda, objective, lambda);
}
