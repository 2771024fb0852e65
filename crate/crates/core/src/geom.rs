//! Planar primitives shared by the cost, constraint and baseline modules.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// 2x2 real matrix, row-major.
pub type Mat2 = [[f64; 2]; 2];

pub fn mat_vec(m: &Mat2, v: Vec2) -> Vec2 {
    Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

/// Signed shoelace area; positive for counter-clockwise rings.
pub fn signed_area(ring: &[Vec2]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        acc += a.cross(b);
    }
    0.5 * acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BBox {
    pub fn of(points: &[Vec2]) -> BBox {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { min, max }
    }
}

/// Half-plane `n · p >= c`.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    fn eval(&self, p: Vec2) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Sutherland-Hodgman clip of an arbitrary simple ring against a convex
/// region given as an intersection of half-planes. The output may contain
/// degenerate zero-width bridges when the subject is concave; those carry
/// no area so shoelace areas of the result stay exact.
pub fn clip_ring(ring: &[Vec2], planes: &[HalfPlane]) -> Vec<Vec2> {
    let mut current: Vec<Vec2> = ring.to_vec();
    let mut next = Vec::with_capacity(ring.len() + 4);
    for plane in planes {
        if current.is_empty() {
            break;
        }
        next.clear();
        let n = current.len();
        for i in 0..n {
            let a = current[i];
            let b = current[(i + 1) % n];
            let fa = plane.eval(a);
            let fb = plane.eval(b);
            let a_in = fa >= 0.0;
            let b_in = fb >= 0.0;
            if a_in {
                next.push(a);
            }
            if a_in != b_in {
                let t = fa / (fa - fb);
                next.push(a.lerp(b, t));
            }
        }
        std::mem::swap(&mut current, &mut next);
    }
    current
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// True when segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (d1 == 0.0 && on(c, d, a)) || (d2 == 0.0 && on(c, d, b)) || (d3 == 0.0 && on(a, b, c)) || (d4 == 0.0 && on(a, b, d))
}

/// Parameters `t` along `ab` where it meets segment `cd` (one value for a
/// crossing, the overlap endpoints for collinear overlap).
pub fn segment_hits(a: Vec2, b: Vec2, c: Vec2, d: Vec2, out: &mut Vec<f64>) {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let qp = c - a;
    let scale = r.norm() * s.norm();
    if denom.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        // parallel; only collinear overlap matters
        if qp.cross(r).abs() > 1e-12 * r.norm().max(1.0) * qp.norm().max(1.0) {
            return;
        }
        let rr = r.dot(r);
        if rr == 0.0 {
            return;
        }
        let t0 = qp.dot(r) / rr;
        let t1 = (d - a).dot(r) / rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if hi < 0.0 || lo > 1.0 {
            return;
        }
        out.push(lo.clamp(0.0, 1.0));
        out.push(hi.clamp(0.0, 1.0));
        return;
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        out.push(t.clamp(0.0, 1.0));
    }
}

/// Distance from `p` to segment `ab`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Crossing-number containment. Points on the boundary are reported as
/// outside when they are within `tol` of an edge.
pub fn point_strictly_inside(p: Vec2, ring: &[Vec2], tol: f64) -> bool {
    let n = ring.len();
    for i in 0..n {
        if point_segment_distance(p, ring[i], ring[(i + 1) % n]) <= tol {
            return false;
        }
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// True when no two non-adjacent edges of the ring touch.
pub fn ring_is_simple(ring: &[Vec2]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec2> {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn shoelace_orientation() {
        let mut sq = square();
        assert_eq!(signed_area(&sq), 1.0);
        sq.reverse();
        assert_eq!(signed_area(&sq), -1.0);
    }

    #[test]
    fn clip_square_by_horizontal_line() {
        let plane = HalfPlane {
            normal: Vec2::new(0.0, 1.0),
            offset: 0.25,
        };
        let clipped = clip_ring(&square(), &[plane]);
        assert!((signed_area(&clipped) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn clip_concave_keeps_exact_area() {
        // U-shape opening upward, cut at y = 0.5 keeps both prongs.
        let u = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(3.0, 0.0),
            Vec2::new(3.0, 2.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 2.0),
            Vec2::new(0.0, 2.0),
        ];
        let plane = HalfPlane {
            normal: Vec2::new(0.0, 1.0),
            offset: 1.5,
        };
        let clipped = clip_ring(&u, &[plane]);
        assert!((signed_area(&clipped) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplicity() {
        assert!(ring_is_simple(&square()));
        let bowtie = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(!ring_is_simple(&bowtie));
    }

    #[test]
    fn containment_excludes_boundary() {
        let sq = square();
        assert!(point_strictly_inside(Vec2::new(0.5, 0.5), &sq, 1e-12));
        assert!(!point_strictly_inside(Vec2::new(1.0, 0.5), &sq, 1e-12));
        assert!(!point_strictly_inside(Vec2::new(1.5, 0.5), &sq, 1e-12));
    }
}
