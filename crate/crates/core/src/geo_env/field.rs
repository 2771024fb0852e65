use crate::error::{Error, Result};
use crate::geom::{BBox, Vec2};

use super::frame::EARTH_RADIUS_M;

/// Typical forecast-model grid spacing in degrees.
pub const DEFAULT_CELL_DEGREES: f64 = 0.1;

/// Grid spacing in frame units that corresponds to `degrees` of latitude.
pub fn cell_size_for_degrees(degrees: f64, meters_per_unit: f64) -> f64 {
    degrees.to_radians() * EARTH_RADIUS_M / meters_per_unit
}

/// Wind and wave vectors sampled at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub wind: Vec2,
    pub wave: Vec2,
}

/// Static wind and wave snapshot on a regular grid in planning-frame units.
/// Node `(i, j)` sits at `origin + (i * cell, j * cell)` and is stored at
/// index `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentField {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    wind: Vec<Vec2>,
    wave: Vec<Vec2>,
}

impl EnvironmentField {
    pub fn new(origin: Vec2, cell: f64, nx: usize, ny: usize, wind: Vec<Vec2>, wave: Vec<Vec2>) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::invalid("environment grid needs at least 2x2 nodes"));
        }
        if !(cell > 0.0 && cell.is_finite()) {
            return Err(Error::invalid("environment cell size must be positive"));
        }
        if !origin.is_finite() {
            return Err(Error::invalid("environment origin must be finite"));
        }
        if wind.len() != nx * ny || wave.len() != nx * ny {
            return Err(Error::invalid(format!(
                "environment grid expects {} nodes, got {} wind and {} wave values",
                nx * ny,
                wind.len(),
                wave.len()
            )));
        }
        if wind.iter().chain(wave.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("environment field values must be finite"));
        }
        Ok(EnvironmentField {
            origin,
            cell,
            nx,
            ny,
            wind,
            wave,
        })
    }

    /// Grid whose node values come from `f(node position)`.
    pub fn from_fn(
        origin: Vec2,
        cell: f64,
        nx: usize,
        ny: usize,
        mut f: impl FnMut(Vec2) -> (Vec2, Vec2),
    ) -> Result<Self> {
        let mut wind = Vec::with_capacity(nx * ny);
        let mut wave = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (v, w) = f(origin + Vec2::new(i as f64 * cell, j as f64 * cell));
                wind.push(v);
                wave.push(w);
            }
        }
        EnvironmentField::new(origin, cell, nx, ny, wind, wave)
    }

    /// Constant field covering `bounds`.
    pub fn uniform(bounds: BBox, cell: f64, wind: Vec2, wave: Vec2) -> Result<Self> {
        let nx = (((bounds.max.x - bounds.min.x) / cell).ceil() as usize + 1).max(2);
        let ny = (((bounds.max.y - bounds.min.y) / cell).ceil() as usize + 1).max(2);
        EnvironmentField::from_fn(bounds.min, cell, nx, ny, |_| (wind, wave))
    }

    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn node_position(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new(i as f64 * self.cell, j as f64 * self.cell)
    }

    pub fn node(&self, i: usize, j: usize) -> FieldSample {
        let k = j * self.nx + i;
        FieldSample {
            wind: self.wind[k],
            wave: self.wave[k],
        }
    }

    pub fn bounds(&self) -> BBox {
        BBox {
            min: self.origin,
            max: self.node_position(self.nx - 1, self.ny - 1),
        }
    }

    pub fn covers(&self, region: &BBox) -> bool {
        let b = self.bounds();
        region.min.x >= b.min.x && region.min.y >= b.min.y && region.max.x <= b.max.x && region.max.y <= b.max.y
    }

    /// Bilinear interpolation of both fields; exact at nodes, no extrapolation.
    pub fn sample(&self, p: Vec2) -> Result<FieldSample> {
        let gx = (p.x - self.origin.x) / self.cell;
        let gy = (p.y - self.origin.y) / self.cell;
        let max_x = (self.nx - 1) as f64;
        let max_y = (self.ny - 1) as f64;
        if !(gx >= 0.0 && gy >= 0.0 && gx <= max_x && gy <= max_y) {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let i = (gx.floor() as usize).min(self.nx - 2);
        let j = (gy.floor() as usize).min(self.ny - 2);
        let fx = gx - i as f64;
        let fy = gy - j as f64;
        let w00 = (1.0 - fx) * (1.0 - fy);
        let w10 = fx * (1.0 - fy);
        let w01 = (1.0 - fx) * fy;
        let w11 = fx * fy;
        let k00 = j * self.nx + i;
        let k10 = k00 + 1;
        let k01 = k00 + self.nx;
        let k11 = k01 + 1;
        let mix = |f: &[Vec2]| f[k00] * w00 + f[k10] * w10 + f[k01] * w01 + f[k11] * w11;
        Ok(FieldSample {
            wind: mix(&self.wind),
            wave: mix(&self.wave),
        })
    }
}
