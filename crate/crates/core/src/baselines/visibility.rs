use petgraph::algo::astar;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::error::{Error, Result};
use crate::geom::{point_strictly_inside, segment_hits, Vec2};
use crate::penalty::Obstacle;

#[derive(Debug, Clone, PartialEq)]
pub enum PathOutcome {
    Found { path: Vec<Vec2>, length: f64 },
    NoPath,
}

impl PathOutcome {
    pub fn length(&self) -> Option<f64> {
        match self {
            PathOutcome::Found { length, .. } => Some(*length),
            PathOutcome::NoPath => None,
        }
    }
}

/// Push every vertex outward along its miter by `clearance`.
pub fn inflate(obstacle: &Obstacle, clearance: f64) -> Result<Obstacle> {
    if !(clearance >= 0.0 && clearance.is_finite()) {
        return Err(Error::invalid("clearance must be non-negative"));
    }
    if clearance == 0.0 {
        return Ok(obstacle.clone());
    }
    let v = obstacle.vertices();
    let n = v.len();
    // counter-clockwise ring: the outward normal of edge a->b is (dy, -dx)
    let normal = |a: Vec2, b: Vec2| {
        let e = (b - a).normalized();
        Vec2::new(e.y, -e.x)
    };
    let out = (0..n)
        .map(|i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let n1 = normal(prev, v[i]);
            let n2 = normal(v[i], next);
            let denom = 1.0 + n1.dot(n2);
            v[i] + (n1 + n2) * (clearance / denom.max(1e-6))
        })
        .collect();
    Obstacle::new(out)
}

fn tolerance(obstacles: &[Obstacle], start: Vec2, end: Vec2) -> f64 {
    let scale = obstacles
        .iter()
        .flat_map(|o| o.vertices().iter())
        .chain([start, end].iter())
        .fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    1e-9 * scale
}

/// True when segment `ab` passes through the interior of `ring`. Touching
/// vertices or running along edges is allowed.
fn enters(a: Vec2, b: Vec2, ring: &[Vec2], tol: f64, hits: &mut Vec<f64>) -> bool {
    hits.clear();
    hits.extend([0.0, 1.0]);
    let n = ring.len();
    for i in 0..n {
        segment_hits(a, b, ring[i], ring[(i + 1) % n], hits);
    }
    hits.sort_by(f64::total_cmp);
    hits.windows(2)
        .any(|w| w[1] - w[0] > 1e-12 && point_strictly_inside(a.lerp(b, 0.5 * (w[0] + w[1])), ring, tol))
}

/// Shortest obstacle-avoiding polyline from `start` to `end` over the
/// visibility graph of the clearance-inflated obstacle vertices.
pub fn shortest_feasible_path(obstacles: &[Obstacle], start: Vec2, end: Vec2, clearance: f64) -> Result<PathOutcome> {
    let inflated = obstacles
        .iter()
        .map(|o| inflate(o, clearance))
        .collect::<Result<Vec<_>>>()?;
    let tol = tolerance(&inflated, start, end);
    for (k, o) in inflated.iter().enumerate() {
        for (name, p) in [("start", start), ("end", end)] {
            if point_strictly_inside(p, o.vertices(), tol) {
                return Err(Error::invalid(format!("{name} point lies inside obstacle {k}")));
            }
        }
    }

    let mut graph = UnGraph::<Vec2, f64>::new_undirected();
    let s = graph.add_node(start);
    let t = graph.add_node(end);
    for o in &inflated {
        for &p in o.vertices() {
            graph.add_node(p);
        }
    }
    let nodes: Vec<NodeIndex> = graph.node_indices().collect();
    let mut hits = Vec::new();
    let mut edges = Vec::new();
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            let (a, b) = (graph[u], graph[v]);
            let len = (b - a).norm();
            if len == 0.0 {
                continue;
            }
            let blocked = inflated.iter().any(|o| {
                let bb = o.bbox();
                let outside = a.x.max(b.x) < bb.min.x
                    || a.x.min(b.x) > bb.max.x
                    || a.y.max(b.y) < bb.min.y
                    || a.y.min(b.y) > bb.max.y;
                !outside && enters(a, b, o.vertices(), tol, &mut hits)
            });
            if !blocked {
                edges.push((u, v, len));
            }
        }
    }
    graph.extend_with_edges(edges);

    let goal = graph[t];
    let found = astar(&graph, s, |n| n == t, |e| *e.weight(), |n| (graph[n] - goal).norm());
    Ok(match found {
        Some((length, route)) => PathOutcome::Found {
            path: route.into_iter().map(|n| graph[n]).collect(),
            length,
        },
        None => PathOutcome::NoPath,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_water_is_a_straight_segment() {
        let r = shortest_feasible_path(&[], Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0), 0.0).unwrap();
        assert_eq!(r.length(), Some(5.0));
    }

    #[test]
    fn square_detour() {
        let sq = Obstacle::rect(1.0, -0.5, 2.0, 0.5).unwrap();
        let r = shortest_feasible_path(&[sq], Vec2::new(0.0, 0.0), Vec2::new(3.0, 0.0), 0.0).unwrap();
        let expected = 1.0 + 2.0 * 1.25f64.sqrt();
        assert!((r.length().unwrap() - expected).abs() < 1e-12);
        assert!((expected - 3.23607).abs() < 5e-6);
    }

    #[test]
    fn enclosed_start_has_no_path() {
        // a C-shaped ring around the start, its mouth plugged by an overlapping block
        let left = Obstacle::new(vec![
            Vec2::new(-2.0, -2.0),
            Vec2::new(2.0, -2.0),
            Vec2::new(2.0, -1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(-2.0, 2.0),
        ])
        .unwrap();
        let cap = Obstacle::rect(0.5, -1.5, 2.5, 1.5).unwrap();
        let r = shortest_feasible_path(&[left, cap], Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0), 0.0).unwrap();
        assert_eq!(r, PathOutcome::NoPath);
    }

    #[test]
    fn start_inside_is_rejected() {
        let sq = Obstacle::rect(-1.0, -1.0, 1.0, 1.0).unwrap();
        assert!(shortest_feasible_path(&[sq], Vec2::ZERO, Vec2::new(3.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn clearance_lengthens_the_detour() {
        let sq = Obstacle::rect(1.0, -0.5, 2.0, 0.5).unwrap();
        let big = inflate(&sq, 0.1).unwrap();
        assert!((big.area() - 1.2 * 1.2).abs() < 1e-12);
        let a = shortest_feasible_path(std::slice::from_ref(&sq), Vec2::ZERO, Vec2::new(3.0, 0.0), 0.0).unwrap();
        let b = shortest_feasible_path(&[sq], Vec2::ZERO, Vec2::new(3.0, 0.0), 0.1).unwrap();
        assert!(b.length().unwrap() > a.length().unwrap());
    }
}
