use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

use super::field::EnvironmentField;
use super::route::{polyline_length, Route};
use super::ship::ShipModel;

/// Midpoint subsamples per segment for the comfort line integral.
pub const DEFAULT_SUBSAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentCost {
    pub time: f64,
    pub comfort: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Voyage time `T`.
    pub time: f64,
    /// Comfort cost `C`.
    pub comfort: f64,
    /// `alpha * T + (1 - alpha) * C`.
    pub total: f64,
    pub alpha: f64,
    pub segments: Vec<SegmentCost>,
}

pub fn voyage_time(route: &Route, ship: &ShipModel) -> f64 {
    polyline_length(route.points()) / ship.speed
}

/// Comfort line integral over a polyline, one value per segment.
/// `env == None` is a calm sea.
pub fn comfort_per_segment(
    points: &[Vec2],
    env: Option<&EnvironmentField>,
    ship: &ShipModel,
    subsamples: usize,
) -> Result<Vec<f64>> {
    let Some(env) = env else {
        return Ok(vec![0.0; points.len().saturating_sub(1)]);
    };
    if subsamples == 0 {
        return Err(Error::invalid("comfort quadrature needs at least one subsample"));
    }
    let k = subsamples as f64;
    points
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let delta = b - a;
            let len = delta.norm();
            if len == 0.0 {
                return Ok(0.0);
            }
            let tangent = delta * (1.0 / len);
            let mut acc = 0.0;
            for j in 0..subsamples {
                let p = a + delta * ((j as f64 + 0.5) / k);
                acc += ship.response(&env.sample(p)?, tangent);
            }
            Ok(acc * len / k)
        })
        .collect()
}

pub fn comfort_cost(route: &Route, env: Option<&EnvironmentField>, ship: &ShipModel, subsamples: usize) -> Result<f64> {
    Ok(comfort_per_segment(route.points(), env, ship, subsamples)?.iter().sum())
}

pub fn combine(alpha: f64, time: f64, comfort: f64) -> f64 {
    alpha * time + (1.0 - alpha) * comfort
}

pub fn route_cost(
    route: &Route,
    env: Option<&EnvironmentField>,
    ship: &ShipModel,
    alpha: f64,
    subsamples: usize,
) -> Result<CostBreakdown> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha = {alpha} must lie in [0, 1]")));
    }
    let comfort = comfort_per_segment(route.points(), env, ship, subsamples)?;
    let segments: Vec<SegmentCost> = route
        .points()
        .windows(2)
        .zip(&comfort)
        .map(|(w, &c)| SegmentCost {
            time: (w[1] - w[0]).norm() / ship.speed,
            comfort: c,
        })
        .collect();
    let time: f64 = segments.iter().map(|s| s.time).sum();
    let comfort: f64 = comfort.iter().sum();
    Ok(CostBreakdown {
        time,
        comfort,
        total: combine(alpha, time, comfort),
        alpha,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BBox;

    fn ship(speed: f64) -> ShipModel {
        ShipModel {
            speed,
            wind_response: [[1.0, 0.0], [0.0, 1.0]],
            wave_response: [[1.0, 0.0], [0.0, 1.0]],
            max_turn: 1.0,
        }
    }

    fn route(pts: &[[f64; 2]]) -> Route {
        let pts: Vec<Vec2> = pts.iter().map(|&p| p.into()).collect();
        let span = pts.last().unwrap().x;
        Route::new(pts, span).unwrap()
    }

    fn box_field(wind: Vec2, wave: Vec2) -> EnvironmentField {
        let b = BBox {
            min: Vec2::new(-1.0, -10.0),
            max: Vec2::new(10.0, 10.0),
        };
        EnvironmentField::uniform(b, 0.5, wind, wave).unwrap()
    }

    #[test]
    fn voyage_time_examples() {
        // (0,0),(3,4) is not anchored on the x axis, so evaluate the polyline directly
        let len = polyline_length(&[Vec2::ZERO, Vec2::new(3.0, 4.0)]);
        assert_eq!(len / 2.5, 2.0);
        let straight = Route::straight(100.0, 4).unwrap();
        assert!((voyage_time(&straight, &ship(10.0)) - 10.0).abs() < 1e-12);
        let bent = route(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]);
        assert!((voyage_time(&bent, &ship(1.0)) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn doubling_speed_halves_time() {
        let bent = route(&[[0.0, 0.0], [1.0, 0.3], [2.5, -0.7], [3.0, 0.0]]);
        let t1 = voyage_time(&bent, &ship(1.7));
        let t2 = voyage_time(&bent, &ship(3.4));
        assert_eq!(t1, 2.0 * t2);
    }

    #[test]
    fn calm_sea_has_zero_comfort_cost() {
        let bent = route(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]);
        let f = box_field(Vec2::ZERO, Vec2::ZERO);
        assert_eq!(comfort_cost(&bent, Some(&f), &ship(1.0), 8).unwrap(), 0.0);
        assert_eq!(comfort_cost(&bent, None, &ship(1.0), 8).unwrap(), 0.0);
    }

    #[test]
    fn constant_headwind_along_straight_route() {
        let f = box_field(Vec2::new(1.0, 0.0), Vec2::ZERO);
        let r = Route::straight(5.0, 3).unwrap();
        let c = comfort_cost(&r, Some(&f), &ship(1.0), 8).unwrap();
        assert!((c - 5.0).abs() < 1e-12);
        // orthogonal leg gets nothing
        let seg = comfort_per_segment(&[Vec2::ZERO, Vec2::new(0.0, 1.0)], Some(&f), &ship(1.0), 8).unwrap();
        assert_eq!(seg, vec![0.0]);
    }

    #[test]
    fn sampling_outside_grid_fails() {
        let f = box_field(Vec2::new(1.0, 0.0), Vec2::ZERO);
        let r = Route::straight(20.0, 3).unwrap();
        assert!(matches!(
            comfort_cost(&r, Some(&f), &ship(1.0), 8),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn alpha_weighting() {
        let f = box_field(Vec2::new(0.5, 0.2), Vec2::new(0.1, -0.3));
        let r = route(&[[0.0, 0.0], [2.0, 1.5], [4.0, -0.5], [6.0, 0.0]]);
        let s = ship(2.0);
        let at = |a| route_cost(&r, Some(&f), &s, a, 8).unwrap();
        let one = at(1.0);
        let zero = at(0.0);
        assert_eq!(one.total, one.time);
        assert_eq!(zero.total, zero.comfort);
        assert_eq!(combine(0.5, 10.0, 5.0), 7.5);
        assert!(route_cost(&r, Some(&f), &s, 1.5, 8).is_err());
        assert!(route_cost(&r, Some(&f), &s, -0.1, 8).is_err());
    }
}
