//! Seeded random streams.
//!
//! Every year of every phase of a run draws from its own ChaCha8 stream,
//! keyed by `(seed, phase, step)`. A year's draws therefore do not depend on
//! how many numbers earlier years consumed, nor on retention or reporting
//! options.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Independent stream families within one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Phase {
    BurnIn = 1,
    Growth = 2,
    CanonBurnIn = 3,
    Canon = 4,
    Sample = 5,
}

pub fn substream(seed: u64, phase: Phase, step: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((phase as u64) << 48) ^ step);
    rng
}

/// SplitMix64 finalizer; derives well-separated child seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
