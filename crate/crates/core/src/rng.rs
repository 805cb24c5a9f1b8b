//! Portable seeded randomness.
//!
//! Every run uses xoshiro256++ seeded through SplitMix64 from a `u64`, and
//! uniform reals are `(next_u64 >> 11) * 2^-53`. Both are short published
//! algorithms, so outcome streams can be reproduced in any language.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type TrialRng = Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> TrialRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniform sample in `[0, 1)` with 53 bits of precision.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
