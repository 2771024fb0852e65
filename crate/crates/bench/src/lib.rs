//! Workloads shared by the criterion benchmarks in `benches/`.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiproute_core::evo::{bridge_chromosomes, Chromosome};
use shiproute_core::io::{load_scenario, Scenario};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

/// A bundled scenario; panics if it does not load.
pub fn scenario(name: &str) -> Scenario {
    load_scenario(&scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Seeded initial-population chromosomes for `scenario` at `resolution`.
pub fn chromosomes(scenario: &Scenario, resolution: u32, count: usize, seed: u64) -> Vec<Chromosome> {
    let p = &scenario.problem;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    bridge_chromosomes(count, p.free_waypoints(), resolution, p.span(), p.encoding(), &mut rng)
}
