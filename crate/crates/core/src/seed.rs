//! Seed mixing.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded through
//! [`rand::SeedableRng::seed_from_u64`] with a 64-bit value. Sub-streams
//! (one per sweep trial, one per estimator chunk) get their seed by folding
//! the stream coordinates into the parent seed with SplitMix64:
//!
//! ```text
//! s0 = splitmix64(parent)
//! s1 = splitmix64(s0 ^ x1)
//! s2 = splitmix64(s1 ^ x2) ...
//! ```
//!
//! The result depends only on the inputs, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 output function applied to `z + golden gamma`.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(parent: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(parent), |s, &x| splitmix64(s ^ x))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
