use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Default count of free waypoints between the fixed endpoints.
pub const DEFAULT_FREE_WAYPOINTS: usize = 20;

/// Piecewise-linear route from `(0, 0)` to `(span, 0)` whose abscissae are
/// fixed and strictly increasing, so it is the graph of a function `y(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    points: Vec<Vec2>,
    span: f64,
}

impl Route {
    pub fn new(points: Vec<Vec2>, span: f64) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::invalid("route span must be positive and finite"));
        }
        if points.len() < 2 {
            return Err(Error::invalid("a route needs at least two points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("route coordinates must be finite"));
        }
        let tol = 1e-9 * span;
        let first = points[0];
        let last = points[points.len() - 1];
        if first.norm() > tol {
            return Err(Error::invalid("route must start at the frame origin"));
        }
        if (last - Vec2::new(span, 0.0)).norm() > tol {
            return Err(Error::invalid("route must end at (span, 0)"));
        }
        if points.windows(2).any(|w| w[1].x <= w[0].x) {
            return Err(Error::invalid("route abscissae must be strictly increasing"));
        }
        if points.iter().any(|p| p.y.abs() > span + tol) {
            return Err(Error::invalid("route ordinates must lie within [-span, span]"));
        }
        Ok(Route { points, span })
    }

    /// Route with uniformly spaced abscissae and the given free ordinates.
    pub fn from_ordinates(span: f64, ordinates: &[f64]) -> Result<Self> {
        Route::new(uniform_points(span, ordinates), span)
    }

    pub fn straight(span: f64, free_waypoints: usize) -> Result<Self> {
        Route::from_ordinates(span, &vec![0.0; free_waypoints])
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn free_ordinates(&self) -> Vec<f64> {
        self.points[1..self.points.len() - 1].iter().map(|p| p.y).collect()
    }

    /// Unit tangent of segment `k` (1-based, `P_{k-1} -> P_k`).
    pub fn segment_tangent(&self, k: usize) -> Result<Vec2> {
        if k == 0 || k > self.segment_count() {
            return Err(Error::invalid(format!(
                "segment index {k} outside 1..={}",
                self.segment_count()
            )));
        }
        Ok((self.points[k] - self.points[k - 1]).normalized())
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.points)
    }
}

/// Points `(x_i, y_i)` with `x_i = i * span / (m + 1)` and fixed endpoints.
pub(crate) fn uniform_points(span: f64, ordinates: &[f64]) -> Vec<Vec2> {
    let segments = ordinates.len() + 1;
    let mut pts = Vec::with_capacity(segments + 1);
    pts.push(Vec2::ZERO);
    for (i, &y) in ordinates.iter().enumerate() {
        pts.push(Vec2::new(span * (i + 1) as f64 / segments as f64, y));
    }
    pts.push(Vec2::new(span, 0.0));
    pts
}

pub fn polyline_length(points: &[Vec2]) -> f64 {
    points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

/// Unit tangent of the segment `a -> b`.
pub fn segment_tangent(a: Vec2, b: Vec2) -> Vec2 {
    (b - a).normalized()
}
