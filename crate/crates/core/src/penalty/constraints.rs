use serde::{Deserialize, Serialize};

use crate::geom::{clip_ring, signed_area, HalfPlane, Vec2};

use super::obstacle::Obstacle;

/// Relative area below which a sliver split counts as no crossing.
pub const DEFAULT_AREA_TOLERANCE: f64 = 1e-9;

/// Obstacle area on each side of a route graph, restricted to the route's
/// x-span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitAreas {
    pub above: f64,
    pub below: f64,
}

/// Areas of `obstacle` above and below the piecewise-linear graph through
/// `graph` (abscissae strictly increasing). Each segment's x-interval is a
/// vertical strip; the polygon is clipped against the strip and against the
/// half-plane above the segment's supporting line.
pub fn split_areas(graph: &[Vec2], obstacle: &Obstacle) -> SplitAreas {
    let bb = obstacle.bbox();
    let ring = obstacle.vertices();
    let mut above = 0.0;
    let mut below = 0.0;
    for w in graph.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q.x <= bb.min.x || p.x >= bb.max.x {
            continue;
        }
        let slope = (q.y - p.y) / (q.x - p.x);
        let lo = p.x.max(bb.min.x);
        let hi = q.x.min(bb.max.x);
        let y_lo = p.y + slope * (lo - p.x);
        let y_hi = p.y + slope * (hi - p.x);
        let line_min = y_lo.min(y_hi);
        let line_max = y_lo.max(y_hi);

        let strip_area = || {
            if p.x <= bb.min.x && q.x >= bb.max.x {
                return obstacle.area();
            }
            let strip = [
                HalfPlane {
                    normal: Vec2::new(1.0, 0.0),
                    offset: p.x,
                },
                HalfPlane {
                    normal: Vec2::new(-1.0, 0.0),
                    offset: -q.x,
                },
            ];
            signed_area(&clip_ring(ring, &strip)).max(0.0)
        };

        if line_min >= bb.max.y {
            below += strip_area();
            continue;
        }
        if line_max <= bb.min.y {
            above += strip_area();
            continue;
        }
        let in_strip = strip_area();
        let upper = HalfPlane {
            normal: Vec2::new(-slope, 1.0),
            offset: p.y - slope * p.x,
        };
        let strip_and_upper = [
            HalfPlane {
                normal: Vec2::new(1.0, 0.0),
                offset: p.x,
            },
            HalfPlane {
                normal: Vec2::new(-1.0, 0.0),
                offset: -q.x,
            },
            upper,
        ];
        let up = signed_area(&clip_ring(ring, &strip_and_upper)).clamp(0.0, in_strip);
        above += up;
        below += in_strip - up;
    }
    SplitAreas { above, below }
}

/// `h = -min(S1, S2) / max(S1, S2)`, snapped to 0 when the smaller part is
/// at most `area_tol * A`.
pub fn split_ratio(graph: &[Vec2], obstacle: &Obstacle, area_tol: f64) -> f64 {
    let SplitAreas { above, below } = split_areas(graph, obstacle);
    let small = above.min(below);
    let large = above.max(below);
    if large <= 0.0 || small <= area_tol * obstacle.area() {
        return 0.0;
    }
    -(small / large)
}

/// `phi_max - turn_k` for each interior vertex; negative means the turn is
/// sharper than allowed.
pub fn turn_slacks(graph: &[Vec2], max_turn: f64) -> Vec<f64> {
    let dirs: Vec<Vec2> = graph.windows(2).map(|w| (w[1] - w[0]).normalized()).collect();
    dirs.windows(2)
        .map(|d| max_turn - d[0].dot(d[1]).clamp(-1.0, 1.0).acos())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// Split ratio per obstacle, each in `[-1, 0]`.
    pub h: Vec<f64>,
    /// Turn slack per interior waypoint, radians.
    pub g: Vec<f64>,
    pub feasible: bool,
}

impl ConstraintReport {
    pub fn new(h: Vec<f64>, g: Vec<f64>) -> Self {
        let feasible = h.iter().all(|&v| v == 0.0) && g.iter().all(|&v| v >= 0.0);
        ConstraintReport { h, g, feasible }
    }

    pub fn violated_obstacles(&self) -> usize {
        self.h.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn violated_turns(&self) -> usize {
        self.g.iter().filter(|&&v| v < 0.0).count()
    }
}

pub fn evaluate_constraints(graph: &[Vec2], obstacles: &[Obstacle], max_turn: f64, area_tol: f64) -> ConstraintReport {
    let h = obstacles.iter().map(|o| split_ratio(graph, o, area_tol)).collect();
    ConstraintReport::new(h, turn_slacks(graph, max_turn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn unit_square() -> Obstacle {
        Obstacle::rect(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    fn horizontal(y: f64) -> Vec<Vec2> {
        vec![Vec2::new(-1.0, y), Vec2::new(2.0, y)]
    }

    #[test]
    fn square_examples() {
        let sq = unit_square();
        assert_eq!(split_ratio(&horizontal(2.0), &sq, 1e-9), 0.0);
        assert_eq!(split_ratio(&horizontal(0.5), &sq, 1e-9), -1.0);
        let a = split_areas(&horizontal(0.25), &sq);
        assert!((a.above - 0.75).abs() < 1e-15);
        assert!((a.below - 0.25).abs() < 1e-15);
        assert!((split_ratio(&horizontal(0.25), &sq, 1e-9) + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bent_route_through_square() {
        // V-shaped graph with its vertex at the square's centre; area above the V
        // inside the unit square is 1 - 2 * (1/2 * 0.5 * 0.5) ... computed by hand:
        // lines y = 0.5 - |x - 0.5| * 0.5 => below part is a pentagon of area 0.375
        let g = vec![Vec2::new(-1.0, -0.25), Vec2::new(0.5, 0.5), Vec2::new(2.0, -0.25)];
        let a = split_areas(&g, &unit_square());
        assert!((a.above + a.below - 1.0).abs() < 1e-14);
        assert!((a.below - 0.375).abs() < 1e-14, "{a:?}");
    }

    #[test]
    fn obstacle_outside_span_contributes_nothing() {
        let far = Obstacle::rect(5.0, -1.0, 6.0, 1.0).unwrap();
        assert_eq!(split_ratio(&horizontal(0.0), &far, 1e-9), 0.0);
        // half inside the span: clipped before splitting
        let half = Obstacle::rect(1.5, -1.0, 2.5, 1.0).unwrap();
        let a = split_areas(&horizontal(0.0), &half);
        assert!((a.above - 0.5).abs() < 1e-15 && (a.below - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grazing_edge_is_not_a_crossing() {
        assert_eq!(split_ratio(&horizontal(1.0), &unit_square(), 1e-9), 0.0);
        assert_eq!(split_ratio(&horizontal(0.0), &unit_square(), 1e-9), 0.0);
    }

    #[test]
    fn moving_away_from_centre_raises_h() {
        let sq = unit_square();
        let mut last = f64::NEG_INFINITY;
        for k in (1..=9).rev() {
            let y = 0.05 * k as f64; // 0.45 down to 0.05
            let h = split_ratio(&horizontal(y), &sq, 1e-9);
            assert!(h > last, "y={y} h={h} last={last}");
            last = h;
        }
    }

    #[test]
    fn turn_examples() {
        let pts = |v: &[[f64; 2]]| v.iter().map(|&p| Vec2::from(p)).collect::<Vec<_>>();
        let g = turn_slacks(&pts(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), FRAC_PI_4);
        assert_eq!(g, vec![FRAC_PI_4]);
        let g = turn_slacks(&pts(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]), FRAC_PI_4);
        assert!((g[0] - (FRAC_PI_4 - FRAC_PI_2)).abs() < 1e-15);
        let g = turn_slacks(&pts(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]), 0.1);
        assert!((g[0] - 0.1).abs() < 1e-7);
        let r = ConstraintReport::new(vec![0.0], g);
        assert!(r.feasible);
    }

    #[test]
    fn report_feasibility() {
        assert!(!ConstraintReport::new(vec![-0.1], vec![0.2]).feasible);
        assert!(!ConstraintReport::new(vec![0.0], vec![-1e-12]).feasible);
        assert!(ConstraintReport::new(vec![], vec![]).feasible);
    }
}
