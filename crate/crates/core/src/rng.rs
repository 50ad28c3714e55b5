//! Deterministic seeding. Every random choice derives from one 64-bit seed and a
//! named stream so that unrelated components never share a generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fixed stream identifiers.
pub mod stream {
    pub const GENERATOR: u64 = 1;
    pub const FRT: u64 = 2;
    pub const SOLVER: u64 = 3;
}

/// Generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Derive a child seed, used for retries and per-instance seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
