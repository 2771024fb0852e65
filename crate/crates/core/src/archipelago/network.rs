use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::MAX_RESOLUTION;

/// One level of the hierarchy: `islands` populations at `resolution` bits
/// per ordinate, all annealing at `anneal_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub resolution: u32,
    #[serde(default = "one")]
    pub islands: usize,
    pub anneal_rate: f64,
}

fn one() -> usize {
    1
}

/// Settings shared by every island of a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IslandSettings {
    pub population_size: usize,
    pub lambda0: f64,
    pub migration_interval: u64,
}

impl Default for IslandSettings {
    fn default() -> Self {
        IslandSettings {
            population_size: 40,
            lambda0: 1.0,
            migration_interval: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IslandConfig {
    pub resolution: u32,
    pub population_size: usize,
    pub anneal_rate: f64,
    pub lambda0: f64,
    pub migration_interval: u64,
    pub level: usize,
}

impl IslandConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 || self.resolution > MAX_RESOLUTION {
            return Err(Error::invalid(format!(
                "island resolution {} out of range",
                self.resolution
            )));
        }
        if self.population_size < 2 {
            return Err(Error::invalid("island population size must be at least 2"));
        }
        if !(self.anneal_rate >= 0.0 && self.anneal_rate.is_finite()) {
            return Err(Error::invalid("anneal rate must be non-negative"));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::invalid("lambda0 must be positive"));
        }
        if self.migration_interval == 0 {
            return Err(Error::invalid("migration interval must be at least 1"));
        }
        Ok(())
    }
}

/// Islands plus directed migration links. Every link runs from a coarser
/// (or equal) resolution to a finer one, so the network is a DAG by level.
#[derive(Debug, Clone, PartialEq)]
pub struct IslandNetwork {
    islands: Vec<IslandConfig>,
    edges: Vec<(usize, usize)>,
}

impl IslandNetwork {
    pub fn new(islands: Vec<IslandConfig>, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if islands.is_empty() {
            return Err(Error::invalid("network needs at least one island"));
        }
        for island in &islands {
            island.validate()?;
        }
        for &(s, t) in &edges {
            if s >= islands.len() || t >= islands.len() {
                return Err(Error::invalid(format!("edge {s}->{t} references a missing island")));
            }
            let (a, b) = (&islands[s], &islands[t]);
            if a.resolution > b.resolution {
                return Err(Error::RuleViolation(format!(
                    "edge {s}->{t} would send a {}-bit model to a {}-bit island",
                    a.resolution, b.resolution
                )));
            }
            if s == t || a.level > b.level || (a.level == b.level && s > t) {
                return Err(Error::invalid(format!("edge {s}->{t} breaks the level ordering")));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(IslandNetwork { islands, edges })
    }

    pub fn islands(&self) -> &[IslandConfig] {
        &self.islands
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, island: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == island).map(|e| e.1)
    }

    pub fn in_edges(&self, island: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.1 == island).map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.islands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.islands.is_empty()
    }

    pub fn finest_resolution(&self) -> u32 {
        self.islands.iter().map(|i| i.resolution).max().unwrap_or(0)
    }
}

/// Levels must have strictly increasing resolution; every island links to
/// every island on every deeper level.
pub fn build_network(levels: &[LevelSpec], settings: &IslandSettings) -> Result<IslandNetwork> {
    if levels.is_empty() {
        return Err(Error::invalid("network needs at least one level"));
    }
    if levels.windows(2).any(|w| w[1].resolution <= w[0].resolution) {
        return Err(Error::invalid(
            "levels must be listed by strictly increasing resolution",
        ));
    }
    let mut islands = Vec::new();
    let mut level_of = Vec::new();
    for (level, spec) in levels.iter().enumerate() {
        if spec.islands == 0 {
            return Err(Error::invalid(format!("level {level} has no islands")));
        }
        for _ in 0..spec.islands {
            islands.push(IslandConfig {
                resolution: spec.resolution,
                population_size: settings.population_size,
                anneal_rate: spec.anneal_rate,
                lambda0: settings.lambda0,
                migration_interval: settings.migration_interval,
                level,
            });
            level_of.push(level);
        }
    }
    let mut edges = Vec::new();
    for s in 0..islands.len() {
        for t in 0..islands.len() {
            if level_of[s] < level_of[t] {
                edges.push((s, t));
            }
        }
    }
    IslandNetwork::new(islands, edges)
}

pub fn default_levels() -> Vec<LevelSpec> {
    vec![
        LevelSpec {
            resolution: 6,
            islands: 1,
            anneal_rate: 0.20,
        },
        LevelSpec {
            resolution: 8,
            islands: 1,
            anneal_rate: 0.10,
        },
        LevelSpec {
            resolution: 10,
            islands: 1,
            anneal_rate: 0.05,
        },
    ]
}
