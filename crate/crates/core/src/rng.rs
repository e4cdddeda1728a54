//! Seed derivation.
//!
//! Every stochastic step draws from a `ChaCha8Rng` whose seed is derived from
//! the master seed plus a stream tag and an index. Child seeds never depend
//! on scheduling order, so serial and parallel fits agree bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags keep unrelated consumers of one master seed apart.
pub mod stream {
    pub const SPLIT: u64 = 1;
    pub const DOWNSAMPLE: u64 = 2;
    pub const TREE_NODE: u64 = 3;
    pub const FOREST_TREE: u64 = 4;
    pub const FOREST_BOOTSTRAP: u64 = 5;
    pub const GBM_STAGE: u64 = 6;
    pub const KFOLD: u64 = 7;
    pub const SUBSAMPLE: u64 = 8;
    pub const ADA_ROUND: u64 = 9;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed for item `index` of `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93)) ^ index)
}

pub fn rng_for(master: u64, stream: u64, index: u64) -> Rng {
    Rng::seed_from_u64(derive_seed(master, stream, index))
}
