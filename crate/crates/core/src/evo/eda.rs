use rand::Rng;
use serde::{Deserialize, Serialize};

use super::chromosome::Chromosome;
use crate::error::{Error, Result};

/// Univariate marginal model: one probability of a set bit per position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionModel {
    marginals: Vec<f64>,
    resolution: u32,
    /// How many chromosomes the marginals were estimated from (0 when set
    /// directly).
    sample_count: usize,
}

impl DistributionModel {
    /// Model with explicit marginals, no clamping applied.
    pub fn from_marginals(marginals: Vec<f64>, resolution: u32) -> Result<Self> {
        if resolution == 0 || marginals.is_empty() || !marginals.len().is_multiple_of(resolution as usize) {
            return Err(Error::invalid(
                "marginal count must be a positive multiple of the resolution",
            ));
        }
        if marginals.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::invalid("marginals must lie in [0, 1]"));
        }
        Ok(DistributionModel {
            marginals,
            resolution,
            sample_count: 0,
        })
    }

    pub fn marginals(&self) -> &[f64] {
        &self.marginals
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn ordinate_count(&self) -> usize {
        self.marginals.len() / self.resolution as usize
    }
}

/// Per-position frequency of ones, clamped to `[1/(2L), 1 - 1/(2L)]`.
pub fn eda_fit<'a, I>(selected: I) -> Result<DistributionModel>
where
    I: IntoIterator<Item = &'a Chromosome>,
{
    let mut iter = selected.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::invalid("cannot fit a distribution to an empty selection"))?;
    let resolution = first.resolution();
    let mut ones: Vec<u32> = first.bits().iter().map(|&b| b as u32).collect();
    let mut count = 1usize;
    for c in iter {
        if c.resolution() != resolution || c.len() != ones.len() {
            return Err(Error::invalid("selection mixes chromosome resolutions"));
        }
        for (acc, &b) in ones.iter_mut().zip(c.bits()) {
            *acc += b as u32;
        }
        count += 1;
    }
    let floor = 1.0 / (2.0 * count as f64);
    let marginals = ones
        .into_iter()
        .map(|k| (k as f64 / count as f64).clamp(floor, 1.0 - floor))
        .collect();
    Ok(DistributionModel {
        marginals,
        resolution,
        sample_count: count,
    })
}

/// Independent Bernoulli draw per bit.
pub fn eda_sample<G: Rng + ?Sized>(model: &DistributionModel, count: usize, rng: &mut G) -> Vec<Chromosome> {
    (0..count)
        .map(|_| {
            let bits = model.marginals.iter().map(|&p| rng.gen::<f64>() < p).collect();
            Chromosome::new(bits, model.resolution).expect("model shape is valid")
        })
        .collect()
}
