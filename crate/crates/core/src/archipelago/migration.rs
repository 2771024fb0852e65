use rand::Rng;

use crate::error::{Error, Result};
use crate::evo::{eda_sample, DistributionModel, Objective, Population};

/// Payload sent along a migration link: a distribution, never individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct MigrationMessage {
    pub source: usize,
    pub generation: u64,
    pub model: DistributionModel,
}

impl MigrationMessage {
    /// Number of probabilities carried.
    pub fn payload_len(&self) -> usize {
        self.model.marginals().len()
    }
}

/// Refine a model to a finer resolution: each ordinate's source marginals
/// become its most significant bits and the extra low bits are fair coins.
pub fn project_model(model: &DistributionModel, target: u32) -> Result<DistributionModel> {
    let source = model.resolution();
    if target < source {
        return Err(Error::RuleViolation(format!(
            "cannot project a {source}-bit model down to {target} bits"
        )));
    }
    if target == source {
        return Ok(model.clone());
    }
    let extra = (target - source) as usize;
    let mut out = Vec::with_capacity(model.ordinate_count() * target as usize);
    for chunk in model.marginals().chunks(source as usize) {
        out.extend_from_slice(chunk);
        out.extend(std::iter::repeat_n(0.5, extra));
    }
    DistributionModel::from_marginals(out, target)
}

/// Number of immigrants for a population of `size`.
pub fn immigrant_count(fraction: f64, size: usize) -> usize {
    (fraction * size as f64).ceil() as usize
}

/// Sample immigrants from the (projected) model and merge them elitistly.
pub fn incorporate<R, O, G>(
    pop: &mut Population<R>,
    msg: &MigrationMessage,
    fraction: f64,
    objective: &O,
    lambda: f64,
    rng: &mut G,
) -> Result<usize>
where
    R: Clone,
    O: Objective<Record = R>,
    G: Rng + ?Sized,
{
    let model = project_model(&msg.model, pop.resolution())?;
    if model.marginals().len() != pop.chromosome_len() {
        return Err(Error::Internal(format!(
            "projected model has {} marginals but island chromosomes have {} bits",
            model.marginals().len(),
            pop.chromosome_len()
        )));
    }
    let count = immigrant_count(fraction, pop.capacity());
    let immigrants = eda_sample(&model, count, rng);
    pop.merge(Vec::new(), immigrants, objective, lambda);
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::{Chromosome, FnObjective};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_identity_and_refinement() {
        let m = DistributionModel::from_marginals(vec![1.0, 0.25, 0.0, 0.75], 2).unwrap();
        assert_eq!(project_model(&m, 2).unwrap(), m);
        let p = project_model(&m, 4).unwrap();
        assert_eq!(p.marginals(), &[1.0, 0.25, 0.5, 0.5, 0.0, 0.75, 0.5, 0.5]);
        assert_eq!(p.resolution(), 4);
        assert!(matches!(project_model(&p, 2), Err(Error::RuleViolation(_))));
    }

    #[test]
    fn ceiling_rule() {
        assert_eq!(immigrant_count(0.25, 40), 10);
        assert_eq!(immigrant_count(0.25, 41), 11);
        assert_eq!(immigrant_count(0.01, 2), 1);
    }

    fn value() -> FnObjective<impl Fn(&Chromosome) -> f64 + Sync> {
        FnObjective(|c: &Chromosome| c.raw_codes().iter().sum::<u64>() as f64)
    }

    #[test]
    fn worse_immigrants_change_nothing() {
        let obj = value();
        let mut pop = Population::from_chromosomes(
            vec![
                Chromosome::from_codes(&[0, 0], 2).unwrap(),
                Chromosome::from_codes(&[0, 1], 2).unwrap(),
            ],
            &obj,
            1.0,
        )
        .unwrap();
        let before: Vec<_> = pop.members().iter().map(|m| m.chromosome.clone()).collect();
        // a model that only ever produces all-ones, the worst possible code
        let msg = MigrationMessage {
            source: 0,
            generation: 10,
            model: DistributionModel::from_marginals(vec![1.0; 4], 2).unwrap(),
        };
        incorporate(&mut pop, &msg, 0.5, &obj, 1.0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let after: Vec<_> = pop.members().iter().map(|m| m.chromosome.clone()).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn known_optimum_never_hurts() {
        let obj = value();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pop = Population::random(8, 3, 4, &obj, 1.0, &mut rng).unwrap();
        let before = pop.best().fitness;
        // coarse 2-bit model pinned at code 0 for every ordinate
        let msg = MigrationMessage {
            source: 0,
            generation: 0,
            model: DistributionModel::from_marginals(vec![0.0; 6], 2).unwrap(),
        };
        assert_eq!(incorporate(&mut pop, &msg, 0.25, &obj, 1.0, &mut rng).unwrap(), 2);
        assert!(pop.best().fitness <= before);
        assert_eq!(pop.members().len(), 8);
    }

    #[test]
    fn coarser_target_is_refused() {
        let obj = value();
        let mut pop = Population::random(4, 2, 2, &obj, 1.0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let msg = MigrationMessage {
            source: 0,
            generation: 0,
            model: DistributionModel::from_marginals(vec![0.5; 8], 4).unwrap(),
        };
        assert!(incorporate(&mut pop, &msg, 0.25, &obj, 1.0, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }
}
