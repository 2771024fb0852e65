//! The evaluator bundle shared by every solver: route decoding, physical
//! cost, constraint report and generalized cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::{decode, Chromosome, Encoding, Objective};
use crate::geo_env::{combine, comfort_per_segment, route_cost, CostBreakdown, EnvironmentField, Route, ShipModel};
use crate::geom::{BBox, Vec2};
use crate::penalty::{
    evaluate_constraints, generalized_cost, penalty, ConstraintReport, GeneralizedCost, Obstacle, PenaltyConfig,
};

/// Lambda-independent part of one route evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub time: f64,
    pub comfort: f64,
    /// Physical cost `S`.
    pub cost: f64,
    pub report: ConstraintReport,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.report.feasible
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    span: f64,
    free_waypoints: usize,
    obstacles: Vec<Obstacle>,
    environment: Option<EnvironmentField>,
    ship: ShipModel,
    alpha: f64,
    penalty: PenaltyConfig,
    subsamples: usize,
    encoding: Encoding,
}

impl Problem {
    pub fn new(
        span: f64,
        free_waypoints: usize,
        obstacles: Vec<Obstacle>,
        environment: Option<EnvironmentField>,
        ship: ShipModel,
        alpha: f64,
    ) -> Result<Self> {
        let p = Problem {
            span,
            free_waypoints,
            obstacles,
            environment,
            ship,
            alpha,
            penalty: PenaltyConfig::default(),
            subsamples: crate::geo_env::DEFAULT_SUBSAMPLES,
            encoding: Encoding::Binary,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_penalty(mut self, penalty: PenaltyConfig) -> Result<Self> {
        penalty.validate()?;
        self.penalty = penalty;
        Ok(self)
    }

    pub fn with_subsamples(mut self, subsamples: usize) -> Result<Self> {
        if subsamples == 0 {
            return Err(Error::invalid("comfort subsamples must be at least 1"));
        }
        self.subsamples = subsamples;
        Ok(self)
    }

    pub fn with_encoding(mut self, encoding: Encoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.span > 0.0 && self.span.is_finite()) {
            return Err(Error::invalid("span must be positive and finite"));
        }
        if self.free_waypoints == 0 {
            return Err(Error::invalid("at least one free waypoint is required"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(format!("alpha = {} must lie in [0, 1]", self.alpha)));
        }
        self.ship.validate()?;
        if let Some(env) = &self.environment {
            if !env.covers(&self.search_region()) {
                return Err(Error::invalid(
                    "environment grid must cover the search rectangle [0, d] x [-d, d]",
                ));
            }
        }
        Ok(())
    }

    /// The rectangle every decoded route stays inside.
    pub fn search_region(&self) -> BBox {
        BBox {
            min: Vec2::new(0.0, -self.span),
            max: Vec2::new(self.span, self.span),
        }
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn free_waypoints(&self) -> usize {
        self.free_waypoints
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn environment(&self) -> Option<&EnvironmentField> {
        self.environment.as_ref()
    }

    pub fn ship(&self) -> &ShipModel {
        &self.ship
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn penalty_config(&self) -> &PenaltyConfig {
        &self.penalty
    }

    pub fn subsamples(&self) -> usize {
        self.subsamples
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn decode(&self, c: &Chromosome) -> Route {
        decode(c, self.span, self.encoding)
    }

    /// Evaluate any polyline whose abscissae increase strictly. Callers
    /// must keep it inside the search rectangle when an environment is set.
    pub fn evaluate_points(&self, points: &[Vec2]) -> Result<Evaluation> {
        let comfort: f64 = comfort_per_segment(points, self.environment.as_ref(), &self.ship, self.subsamples)?
            .iter()
            .sum();
        let length: f64 = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        let time = length / self.ship.speed;
        let report = evaluate_constraints(points, &self.obstacles, self.ship.max_turn, self.penalty.area_tol);
        Ok(Evaluation {
            time,
            comfort,
            cost: combine(self.alpha, time, comfort),
            report,
        })
    }

    pub fn evaluate(&self, route: &Route) -> Evaluation {
        self.evaluate_points(route.points())
            .expect("routes inside the search rectangle are always inside the environment grid")
    }

    pub fn breakdown(&self, route: &Route) -> Result<CostBreakdown> {
        route_cost(
            route,
            self.environment.as_ref(),
            &self.ship,
            self.alpha,
            self.subsamples,
        )
    }

    pub fn generalized(&self, eval: &Evaluation, lambda: f64) -> GeneralizedCost {
        let params = self.penalty.at(lambda);
        generalized_cost(eval.cost, penalty(&eval.report, &params), params.lambda)
    }
}

impl Objective for Problem {
    type Record = Evaluation;

    fn record(&self, chromosome: &Chromosome) -> Evaluation {
        self.evaluate(&self.decode(chromosome))
    }

    fn score(&self, record: &Evaluation, lambda: f64) -> f64 {
        self.generalized(record, lambda).value
    }
}
