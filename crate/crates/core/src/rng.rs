//! Deterministic random streams.
//!
//! Every stochastic component draws from a [`ChaCha8Rng`] whose seed is
//! derived from the master seed plus a path of integers (for example
//! `[ISLAND, island_index, migration_index]`). The derivation folds each
//! path element into the state with the SplitMix64 finalizer, so distinct
//! paths give statistically independent streams and the result never
//! depends on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Concrete RNG type used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Stream tags used as the first path element.
pub mod tag {
    pub const INIT: u64 = 1;
    pub const SHARD: u64 = 2;
    pub const DRAW: u64 = 3;
    pub const ISLAND: u64 = 4;
    pub const SPLIT: u64 = 5;
    pub const OVERSAMPLE: u64 = 6;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` and a path of stream coordinates.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Build the RNG for the stream at `path` under `master`.
pub fn stream(master: u64, path: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(master, path))
}
