//! Fixtures shared by the kernel benchmarks.

use islandfs_core::dataset::synthetic;
use islandfs_core::engine::init_population;
use islandfs_core::mo::dominates;
use islandfs_core::rng::stream;
use islandfs_core::{Dataset, ObjectivePair, Population};
use rand::Rng;

/// The planted-subset workload used by the recovery tests.
pub fn planted(n_rows: usize, n_features: usize, seed: u64) -> Dataset {
    synthetic::planted_subset(n_rows, n_features, &[0, 1, 2], 0.1, seed)
}

pub fn random_objectives(n: usize, seed: u64) -> Vec<ObjectivePair> {
    let mut rng = stream(seed, &[]);
    (0..n).map(|_| ObjectivePair::new(rng.gen(), rng.gen())).collect()
}

/// A mutually non-dominated set built from random points.
pub fn random_front(n: usize, seed: u64) -> Vec<ObjectivePair> {
    let pts = random_objectives(n, seed);
    pts.iter()
        .filter(|p| !pts.iter().any(|q| dominates(q, p)))
        .copied()
        .collect()
}

pub fn unevaluated_population(n: usize, n_features: usize, seed: u64) -> Population {
    init_population(n, n_features, &mut stream(seed, &[]))
}
