//! Deterministic stream derivation for Monte Carlo work.
//!
//! Every stochastic routine in this crate draws from a ChaCha stream derived
//! from a user-supplied 64-bit seed plus a path of integer tags (operation
//! tag, replicate index, sub-stream index). Replicates therefore own disjoint
//! streams and results do not depend on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; used only to mix tags into seed material.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent generator from `seed` and a tag path.
pub fn stream_rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut state = mix(seed);
    for &tag in path {
        state = mix(state ^ mix(tag));
    }
    ChaCha8Rng::seed_from_u64(state)
}
