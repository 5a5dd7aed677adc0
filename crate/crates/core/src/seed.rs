//! Counter-based seed derivation.
//!
//! The randomness of trial `i` in Tester call `c` is a pure function of
//! `(root_seed, c, i)`. Batch size, thread count, and draw order never
//! change which random stream a trial sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Per-trial generator handed to samplers.
pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub root_seed: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

// SplitMix64 output function.
fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    finalize(finalize(a.wrapping_add(GOLDEN)) ^ b.wrapping_mul(GOLDEN).rotate_left(17))
}

impl SeedSpec {
    pub const fn new(root_seed: u64) -> Self {
        Self { root_seed }
    }

    /// Independent child seed, used for repeated runs and hardness probes.
    pub fn derive(&self, index: u64) -> SeedSpec {
        SeedSpec::new(mix(mix(self.root_seed, 0x5eed), index))
    }

    /// 64 random bits for one trial.
    pub fn trial_word(&self, call_index: u64, trial: u64) -> u64 {
        mix(mix(self.root_seed, call_index), trial)
    }

    /// Uniform double in `[0, 1)` for one trial.
    pub fn trial_uniform(&self, call_index: u64, trial: u64) -> f64 {
        (self.trial_word(call_index, trial) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Full generator for trials that need more than one random number.
    pub fn trial_rng(&self, call_index: u64, trial: u64) -> TrialRng {
        ChaCha8Rng::seed_from_u64(self.trial_word(call_index, trial))
    }
}
