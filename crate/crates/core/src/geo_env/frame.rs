use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;
pub const NAUTICAL_MILE_M: f64 = 1852.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    /// Degrees north.
    pub lat: f64,
    /// Degrees east.
    pub lon: f64,
}

impl GeoPoint {
    pub const fn new(lat: f64, lon: f64) -> Self {
        GeoPoint { lat, lon }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Inputs are already planar coordinates.
    Planar,
    /// Local equirectangular projection about the departure point.
    Equirectangular { lat0: f64, lon0: f64, meters_per_unit: f64 },
}

/// Rotated local frame with departure at the origin and arrival on the
/// positive x axis at `(span, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanningFrame {
    projection: Projection,
    /// Projected departure point.
    origin: Vec2,
    rotation: f64,
    span: f64,
}

impl PlanningFrame {
    /// Frame over points that are already planar.
    pub fn planar(departure: Vec2, arrival: Vec2) -> Result<Self> {
        Self::from_projected(Projection::Planar, departure, arrival)
    }

    /// Frame over geographic endpoints; one frame unit is `meters_per_unit`.
    pub fn geographic(departure: GeoPoint, arrival: GeoPoint, meters_per_unit: f64) -> Result<Self> {
        if !(meters_per_unit > 0.0 && meters_per_unit.is_finite()) {
            return Err(Error::invalid("meters_per_unit must be positive and finite"));
        }
        if ![departure.lat, departure.lon, arrival.lat, arrival.lon]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::invalid("endpoint coordinates must be finite"));
        }
        if departure.lat.abs() >= 90.0 {
            return Err(Error::invalid("departure latitude must lie strictly inside (-90, 90)"));
        }
        let projection = Projection::Equirectangular {
            lat0: departure.lat,
            lon0: departure.lon,
            meters_per_unit,
        };
        let a = project(&projection, departure);
        let b = project(&projection, arrival);
        Self::from_projected(projection, a, b)
    }

    fn from_projected(projection: Projection, a: Vec2, b: Vec2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("endpoint coordinates must be finite"));
        }
        let delta = b - a;
        let span = delta.norm();
        if span == 0.0 {
            return Err(Error::invalid("departure and arrival coincide"));
        }
        Ok(PlanningFrame {
            projection,
            origin: a,
            rotation: -delta.y.atan2(delta.x),
            span,
        })
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    pub fn is_geographic(&self) -> bool {
        matches!(self.projection, Projection::Equirectangular { .. })
    }

    /// Planar (pre-rotation) coordinates into the planning frame.
    pub fn to_frame(&self, p: Vec2) -> Vec2 {
        (p - self.origin).rotated(self.rotation)
    }

    pub fn from_frame(&self, q: Vec2) -> Vec2 {
        q.rotated(-self.rotation) + self.origin
    }

    pub fn geo_to_frame(&self, g: GeoPoint) -> Vec2 {
        self.to_frame(project(&self.projection, g))
    }

    pub fn frame_to_geo(&self, q: Vec2) -> GeoPoint {
        unproject(&self.projection, self.from_frame(q))
    }
}

/// Geographic frame with nautical-mile units.
pub fn build_frame(departure: GeoPoint, arrival: GeoPoint) -> Result<PlanningFrame> {
    PlanningFrame::geographic(departure, arrival, NAUTICAL_MILE_M)
}

fn project(projection: &Projection, g: GeoPoint) -> Vec2 {
    match *projection {
        Projection::Planar => Vec2::new(g.lon, g.lat),
        Projection::Equirectangular {
            lat0,
            lon0,
            meters_per_unit,
        } => {
            let k = EARTH_RADIUS_M.to_radians() / meters_per_unit;
            Vec2::new((g.lon - lon0) * lat0.to_radians().cos() * k, (g.lat - lat0) * k)
        }
    }
}

fn unproject(projection: &Projection, p: Vec2) -> GeoPoint {
    match *projection {
        Projection::Planar => GeoPoint::new(p.y, p.x),
        Projection::Equirectangular {
            lat0,
            lon0,
            meters_per_unit,
        } => {
            let k = EARTH_RADIUS_M.to_radians() / meters_per_unit;
            GeoPoint::new(lat0 + p.y / k, lon0 + p.x / (k * lat0.to_radians().cos()))
        }
    }
}
