//! Deterministic RNG stream splitting.
//!
//! Every random draw in the crate goes through a [`ChaCha8Rng`] derived from a
//! top-level seed plus a stream label and an index, so that instance
//! generation, mechanism randomness and optimiser restarts never share state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the label bytes. Stable across platforms and releases.
fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive a child seed for `(label, index)` from `seed`.
pub fn split_seed(seed: u64, label: &str, index: u64) -> u64 {
    let a = splitmix64(seed ^ label_hash(label));
    splitmix64(a ^ splitmix64(index.wrapping_mul(GOLDEN)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    seeded_rng(split_seed(seed, label, index))
}
