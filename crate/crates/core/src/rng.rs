//! Seeded random number helpers.
//!
//! All randomness in the crate flows through ChaCha12 streams created here,
//! so results are reproducible for a given seed on every platform. Float
//! conversion and the Gaussian transform are implemented locally to keep
//! the generated sequences pinned regardless of upstream library changes.

use rand_chacha::ChaCha12Rng;
use rand_core::{Rng, SeedableRng};

/// A deterministic generator from a single integer seed.
pub fn seeded(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Mixes a list of integers into one seed (splitmix64 chain).
///
/// Used to derive independent per-task streams, e.g. from
/// `(seed, n1, n2, draw_index)`, so that parallel scheduling cannot
/// change which network a draw index produces.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in `(0, 1]` with 53 bits of precision.
pub fn unit_open(rng: &mut ChaCha12Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0);
    lo + (hi - lo) * u
}

/// Standard normal draw (Box-Muller).
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1 = unit_open(rng);
    let u2 = unit_open(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
