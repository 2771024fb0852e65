use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Mat2, Vec2};

use super::field::FieldSample;

const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShipModel {
    /// Calm-water speed in frame units per time unit.
    pub speed: f64,
    /// Linear response to the wind vector.
    pub wind_response: Mat2,
    /// Linear response to the wave vector.
    pub wave_response: Mat2,
    /// Largest permissible heading change between consecutive legs, radians.
    pub max_turn: f64,
}

impl Default for ShipModel {
    fn default() -> Self {
        ShipModel {
            speed: 1.0,
            wind_response: IDENTITY,
            wave_response: IDENTITY,
            max_turn: std::f64::consts::FRAC_PI_2,
        }
    }
}

impl ShipModel {
    pub fn new(speed: f64, wind_response: Mat2, wave_response: Mat2, max_turn: f64) -> Result<Self> {
        let ship = ShipModel {
            speed,
            wind_response,
            wave_response,
            max_turn,
        };
        ship.validate()?;
        Ok(ship)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::invalid("ship speed must be positive and finite"));
        }
        let finite = |m: &Mat2| m.iter().flatten().all(|v| v.is_finite());
        if !finite(&self.wind_response) || !finite(&self.wave_response) {
            return Err(Error::invalid("ship response tensors must be finite"));
        }
        if !(self.max_turn > 0.0 && self.max_turn < std::f64::consts::PI) {
            return Err(Error::invalid("max turn must lie in (0, pi) radians"));
        }
        Ok(())
    }

    /// Comfort integrand `(v^T Z_v + w^T Z_w) . t`.
    pub fn response(&self, sample: &FieldSample, tangent: Vec2) -> f64 {
        let row = |m: &Mat2, v: Vec2| Vec2::new(v.x * m[0][0] + v.y * m[1][0], v.x * m[0][1] + v.y * m[1][1]);
        (row(&self.wind_response, sample.wind) + row(&self.wave_response, sample.wave)).dot(tangent)
    }

    /// Speed change caused by wind and waves. Always zero: only the
    /// calm-water speed enters the voyage time.
    pub fn speed_correction(&self, _sample: &FieldSample, _tangent: Vec2) -> f64 {
        0.0
    }
}
