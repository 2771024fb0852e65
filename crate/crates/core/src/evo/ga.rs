use rand::Rng;
use serde::{Deserialize, Serialize};

use super::chromosome::Chromosome;
use super::population::Member;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub tournament_size: usize,
    pub crossover_prob: f64,
    /// Per-bit flip probability; `None` means `1 / chromosome length`.
    pub mutation_prob: Option<f64>,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            tournament_size: 2,
            crossover_prob: 0.9,
            mutation_prob: None,
        }
    }
}

pub fn tournament<'a, R, G: Rng + ?Sized>(members: &'a [Member<R>], size: usize, rng: &mut G) -> &'a Member<R> {
    let mut best = &members[rng.gen_range(0..members.len())];
    for _ in 1..size.max(1) {
        let challenger = &members[rng.gen_range(0..members.len())];
        if challenger.fitness < best.fitness {
            best = challenger;
        }
    }
    best
}

/// Swap tails after `cut`: `a[..cut] + b[cut..]` and `b[..cut] + a[cut..]`.
pub fn single_point_crossover(a: &Chromosome, b: &Chromosome, cut: usize) -> (Chromosome, Chromosome) {
    let mut x = a.clone();
    let mut y = b.clone();
    x.bits_mut()[cut..].copy_from_slice(&b.bits()[cut..]);
    y.bits_mut()[cut..].copy_from_slice(&a.bits()[cut..]);
    (x, y)
}

pub fn mutate<G: Rng + ?Sized>(c: &mut Chromosome, prob: f64, rng: &mut G) {
    if prob <= 0.0 {
        return;
    }
    for bit in c.bits_mut() {
        if rng.gen::<f64>() < prob {
            *bit = !*bit;
        }
    }
}

/// Exactly `count` children from tournament-selected parents.
pub fn ga_offspring<R, G: Rng + ?Sized>(
    parents: &[Member<R>],
    count: usize,
    params: &GaParams,
    rng: &mut G,
) -> Vec<Chromosome> {
    let mut out = Vec::with_capacity(count + 1);
    if parents.is_empty() {
        return out;
    }
    let len = parents[0].chromosome.len();
    let pm = params.mutation_prob.unwrap_or(1.0 / len as f64);
    while out.len() < count {
        let a = &tournament(parents, params.tournament_size, rng).chromosome;
        let b = &tournament(parents, params.tournament_size, rng).chromosome;
        let (mut x, mut y) = if len > 1 && rng.gen::<f64>() < params.crossover_prob {
            single_point_crossover(a, b, rng.gen_range(1..len))
        } else {
            (a.clone(), b.clone())
        };
        mutate(&mut x, pm, rng);
        mutate(&mut y, pm, rng);
        out.push(x);
        out.push(y);
    }
    out.truncate(count);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::population::{FnObjective, Population};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chrom(s: &str) -> Chromosome {
        Chromosome::new(s.chars().map(|c| c == '1').collect(), 1).unwrap()
    }

    fn pop() -> Population<f64> {
        let obj = FnObjective(|c: &Chromosome| c.bits().iter().filter(|&&b| b).count() as f64);
        Population::from_chromosomes(
            vec![chrom("000111"), chrom("101010"), chrom("110000"), chrom("111111")],
            &obj,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn crossover_definition() {
        let (x, y) = single_point_crossover(&chrom("0000"), &chrom("1111"), 2);
        assert_eq!(x.to_bit_string(), "0011");
        assert_eq!(y.to_bit_string(), "1100");
    }

    #[test]
    fn identity_operators_copy_parents() {
        let p = pop();
        let params = GaParams {
            tournament_size: 2,
            crossover_prob: 0.0,
            mutation_prob: Some(0.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kids = ga_offspring(p.members(), 25, &params, &mut rng);
        assert_eq!(kids.len(), 25);
        for k in &kids {
            assert!(p.members().iter().any(|m| &m.chromosome == k));
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let p = pop();
        let run = |seed| {
            ga_offspring(
                p.members(),
                11,
                &GaParams::default(),
                &mut ChaCha8Rng::seed_from_u64(seed),
            )
        };
        assert_eq!(run(9), run(9));
        assert_eq!(run(9).len(), 11);
        assert_ne!(run(9), run(10));
    }
}
