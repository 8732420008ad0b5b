//! Deterministic randomness.
//!
//! All stochastic components draw from ChaCha8 streams seeded explicitly.
//! Independent streams (encoder vs. decoder tie-breaks, per-trial fan-out)
//! are derived from a master seed with the SplitMix64 finalizer, so parallel
//! trials reproduce the sequential results exactly.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Prng = ChaCha8Rng;

/// SplitMix64 finalizer; full-period bijective 64-bit mixer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for an independent stream: stream 0 = encoder,
/// stream 1 = decoder tie-breaks, streams >= 2 free for callers.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master ^ mix64(stream))
}

/// Per-trial seed for Monte Carlo fan-out.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    derive_seed(master, 0x5EED_0000 ^ trial)
}

pub fn prng_from_seed(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}
