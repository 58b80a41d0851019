//! Seeded randomness shared by every generator.
//!
//! All randomized operations draw from a SplitMix64 stream whose state is the
//! 64-bit seed itself. Uniform reals use the top 53 bits of each draw, so an
//! instance is reproducible from `(parameters, seed)` alone.

use rand::{RngCore, SeedableRng};
pub use rand_xoshiro::SplitMix64;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform in `[0, 1)` built from the high 53 bits of one draw.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `true` with probability `prob`; consumes exactly one draw.
pub fn bernoulli(rng: &mut impl RngCore, prob: f64) -> bool {
    uniform(rng) < prob
}

/// SplitMix64 output function, usable as a stateless 64-bit mixing hash.
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
