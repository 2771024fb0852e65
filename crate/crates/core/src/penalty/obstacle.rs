use crate::error::{Error, Result};
use crate::geom::{ring_is_simple, signed_area, BBox, Vec2};

/// Simple polygon (island) in the planning frame, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    vertices: Vec<Vec2>,
    area: f64,
    bbox: BBox,
}

impl Obstacle {
    /// Validates simplicity and positive area. Clockwise rings are reversed;
    /// a repeated closing vertex is dropped.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::invalid("obstacle polygon needs at least 3 vertices"));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("obstacle vertices must be finite"));
        }
        if !ring_is_simple(&vertices) {
            return Err(Error::invalid("obstacle polygon is not simple"));
        }
        let mut area = signed_area(&vertices);
        if area < 0.0 {
            vertices.reverse();
            area = -area;
        }
        if !(area > 0.0) {
            return Err(Error::invalid("obstacle polygon has zero area"));
        }
        let bbox = BBox::of(&vertices);
        Ok(Obstacle { vertices, area, bbox })
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Obstacle::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    /// Regular polygon approximating a disc.
    pub fn regular(center: Vec2, radius: f64, sides: usize, phase: f64) -> Result<Self> {
        let verts = (0..sides)
            .map(|k| {
                let t = phase + std::f64::consts::TAU * k as f64 / sides as f64;
                center + Vec2::new(t.cos(), t.sin()) * radius
            })
            .collect();
        Obstacle::new(verts)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn translated(&self, by: Vec2) -> Obstacle {
        Obstacle {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            area: self.area,
            bbox: BBox {
                min: self.bbox.min + by,
                max: self.bbox.max + by,
            },
        }
    }
}
