//! Deterministic seed derivation. Every randomized routine draws from a
//! ChaCha stream keyed by `(seed, purpose, indices...)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub(crate) mod purpose {
    pub const SKETCH: u64 = 1;
    pub const DECAY: u64 = 2;
    pub const ESTIMATE: u64 = 3;
    pub const GENERATE: u64 = 4;
    pub const DEMO: u64 = 5;
    pub const OV_VECTORS: u64 = 6;
}

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a seed together with a sequence of discriminators.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix(seed), |h, &p| splitmix(h ^ splitmix(p)))
}

/// An independent RNG stream for `(seed, parts)`.
pub fn stream(seed: u64, parts: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(seed, parts))
}
