use rand::Rng;

use super::chromosome::{encode_ordinates, Chromosome, Encoding};

/// Ordinates of a random bridge from `(0, 0)` to `(span, 0)` whose segment
/// slopes stay within `[-1, 1]`, so consecutive headings never differ by
/// more than a right angle.
pub fn bridge_ordinates<G: Rng + ?Sized>(free_waypoints: usize, span: f64, rng: &mut G) -> Vec<f64> {
    let dx = span / (free_waypoints + 1) as f64;
    let raw: Vec<f64> = (0..=free_waypoints).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    let scale = 0.5 * rng.gen::<f64>();
    let mut y = 0.0;
    raw[..free_waypoints]
        .iter()
        .map(|u| {
            y += scale * (u - mean) * dx;
            y
        })
        .collect()
}

/// `count` random bridges encoded at `resolution`.
pub fn bridge_chromosomes<G: Rng + ?Sized>(
    count: usize,
    free_waypoints: usize,
    resolution: u32,
    span: f64,
    encoding: Encoding,
    rng: &mut G,
) -> Vec<Chromosome> {
    (0..count)
        .map(|_| {
            let ys = bridge_ordinates(free_waypoints, span, rng);
            encode_ordinates(&ys, span, resolution, encoding).expect("resolution validated by caller")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bridges_close_and_keep_slopes_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let ys = bridge_ordinates(20, 100.0, &mut rng);
            let dx = 100.0 / 21.0;
            let mut pts = vec![Vec2::ZERO];
            pts.extend(ys.iter().enumerate().map(|(i, &y)| Vec2::new((i + 1) as f64 * dx, y)));
            pts.push(Vec2::new(100.0, 0.0));
            for w in pts.windows(2) {
                assert!(((w[1].y - w[0].y) / dx).abs() <= 1.0 + 1e-12);
            }
        }
    }
}
