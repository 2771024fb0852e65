use serde::{Deserialize, Serialize};

use super::constraints::{ConstraintReport, DEFAULT_AREA_TOLERANCE};
use super::smooth::{smooth_delta_inv, step_penalty, EXP_CLAMP};
use crate::error::{Error, Result};

/// Sharpness and annealing parameters of the smooth penalty at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyParams {
    /// Step sharpness for the turn inequalities.
    pub a: f64,
    /// Delta sharpness for the obstacle equalities.
    pub b: f64,
    /// Width of the penalty-free zone is `1 / lambda`.
    pub lambda: f64,
    pub area_tol: f64,
}

impl PenaltyParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("lambda", self.lambda)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("penalty parameter {name} must be positive")));
            }
        }
        if !(self.area_tol >= 0.0) {
            return Err(Error::invalid("area tolerance must be non-negative"));
        }
        Ok(())
    }
}

/// How penalty parameters evolve with the annealed `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PenaltyConfig {
    pub a: f64,
    pub b: f64,
    pub area_tol: f64,
    /// When set, `a` and `b` follow `lambda` every generation.
    pub tie_lambda_to_a: bool,
    /// Ceiling on the annealed `lambda`; keeps generalized costs finite.
    pub lambda_max: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            a: 1.0,
            b: 1.0,
            area_tol: DEFAULT_AREA_TOLERANCE,
            tie_lambda_to_a: true,
            lambda_max: 1e8,
        }
    }
}

impl PenaltyConfig {
    pub fn at(&self, lambda: f64) -> PenaltyParams {
        let lambda = lambda.min(self.lambda_max);
        let (a, b) = if self.tie_lambda_to_a {
            (lambda, lambda)
        } else {
            (self.a, self.b)
        };
        PenaltyParams {
            a,
            b,
            lambda,
            area_tol: self.area_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        PenaltyParams {
            a: self.a,
            b: self.b,
            lambda: 1.0,
            area_tol: self.area_tol,
        }
        .validate()?;
        if !(self.lambda_max > 0.0) {
            return Err(Error::invalid("lambda_max must be positive"));
        }
        Ok(())
    }
}

/// Smooth penalty `P`: one step term per turn slack plus one delta term per
/// obstacle ratio.
pub fn penalty(report: &ConstraintReport, params: &PenaltyParams) -> f64 {
    let turns: f64 = report.g.iter().map(|&g| step_penalty(g, params.a)).sum();
    let obstacles: f64 = report.h.iter().map(|&h| smooth_delta_inv(h, params.b)).sum();
    turns + obstacles
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedCost {
    pub cost: f64,
    pub penalty: f64,
    /// `|cost + i penalty| * multiplier`.
    pub value: f64,
    pub multiplier: f64,
}

/// Multiplier that leaves the band `0 <= P <= 1/lambda` untouched and grows
/// smoothly outside it.
pub fn multiplier(penalty: f64, lambda: f64) -> f64 {
    let lp = lambda * penalty;
    if lp <= 1.0 {
        return 1.0;
    }
    let s2 = (lp - 1.0).powi(2);
    let t = 1.0 / s2;
    if t < 1e-300 {
        return 1.0 + s2.min(f64::MAX);
    }
    1.0 + 1.0 / t.min(EXP_CLAMP).exp_m1()
}

pub fn generalized_cost(cost: f64, penalty: f64, lambda: f64) -> GeneralizedCost {
    let rho = multiplier(penalty, lambda);
    let value = if penalty == 0.0 {
        cost
    } else {
        cost.hypot(penalty) * rho
    };
    GeneralizedCost {
        cost,
        penalty,
        value: value.min(f64::MAX),
        multiplier: rho,
    }
}

/// One generation of annealing: `lambda * (1 + rate)`.
pub fn anneal(lambda: f64, rate: f64) -> f64 {
    lambda * (1.0 + rate)
}
