//! Seed derivation. Every random consumer gets its own ChaCha stream keyed
//! by a 64-bit seed; sub-seeds are derived by SplitMix64 finalization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `base XOR hash(cell, trial)`.
pub fn task_seed(base: u64, cell: u64, trial: u64) -> u64 {
    base ^ mix(mix(cell).wrapping_add(trial))
}

/// Independent sub-seed for a named purpose.
pub fn derive(seed: u64, stream: Stream) -> u64 {
    mix(seed ^ mix(stream as u64 + 1))
}

#[derive(Clone, Copy, Debug)]
pub enum Stream {
    Truth = 1,
    Graph = 2,
    Init = 3,
    Restart = 4,
}
