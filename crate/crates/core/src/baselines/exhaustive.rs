use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evo::{Chromosome, Objective};
use crate::outcome::{ConvergenceLog, Solution, SolverOutcome};
use crate::problem::Problem;

pub const MAX_EXHAUSTIVE_BITS: usize = 24;

#[derive(Debug, Clone)]
pub struct ExhaustiveResult {
    /// Minimizer of `E` at the given lambda.
    pub optimum: Solution,
    /// Feasible route with the lowest physical cost, if any exists.
    pub best_feasible: Option<Solution>,
    pub evaluations: u64,
}

impl ExhaustiveResult {
    /// Best feasible route as a solver outcome; the `E` minimizer becomes
    /// the fallback when nothing is feasible.
    pub fn into_outcome(self, wall_ms: f64) -> SolverOutcome {
        let lambda = self.optimum.lambda;
        let fallback = self.best_feasible.is_none().then_some(self.optimum);
        SolverOutcome {
            solver: "brute".into(),
            best: self.best_feasible,
            fallback,
            log: ConvergenceLog::default(),
            trace: Vec::new(),
            evaluations: self.evaluations,
            generations: 0,
            lambda_final: lambda,
            wall_ms,
        }
    }
}

/// Score every chromosome with `resolution` bits per ordinate. Ties go to
/// the lexicographically smallest bit string.
pub fn exhaustive_search(problem: &Problem, resolution: u32, lambda: f64) -> Result<ExhaustiveResult> {
    let m = problem.free_waypoints();
    let bits = m * resolution as usize;
    if bits > MAX_EXHAUSTIVE_BITS {
        return Err(Error::InstanceTooLarge {
            bits,
            max: MAX_EXHAUSTIVE_BITS,
        });
    }
    if resolution == 0 {
        return Err(Error::invalid("resolution must be at least 1"));
    }
    let total = 1u64 << bits;
    let pick = |a: (f64, u64), b: (f64, u64)| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
    let none = (f64::INFINITY, u64::MAX);

    let (by_value, by_cost) = (0..total)
        .into_par_iter()
        .map(|index| {
            let c = Chromosome::from_index(index, m, resolution).expect("index fits");
            let eval = problem.record(&c);
            let value = problem.score(&eval, lambda);
            let feasible = if eval.feasible() { (eval.cost, index) } else { none };
            ((value, index), feasible)
        })
        .reduce(|| (none, none), |a, b| (pick(a.0, b.0), pick(a.1, b.1)));

    let solution = |index: u64| {
        let c = Chromosome::from_index(index, m, resolution).expect("index fits");
        let route = problem.decode(&c);
        let eval = problem.evaluate(&route);
        Solution::new(problem, Some(c), route, eval, lambda, 0, 0)
    };
    Ok(ExhaustiveResult {
        optimum: solution(by_value.1),
        best_feasible: (by_cost.1 != u64::MAX).then(|| solution(by_cost.1)),
        evaluations: total,
    })
}
