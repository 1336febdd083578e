//! Counter-based seed derivation.
//!
//! Every random stream in the toolkit is derived from one master seed:
//! `derive(master, stream, counter)` mixes the three words through the
//! SplitMix64 finalizer. The output is a pure function of its inputs, so a
//! per-sample or per-worker stream can be recreated without replaying any
//! other stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named random streams. The discriminant is part of the derivation and must
/// never be renumbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Unitary = 1,
    Sampler = 2,
    LocalSearch = 3,
    UniformBaseline = 4,
    Fixture = 5,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(master: u64, stream: Stream, counter: u64) -> u64 {
    let a = mix(master.wrapping_add(GOLDEN_GAMMA));
    let b = mix(a ^ (stream as u64).wrapping_mul(GOLDEN_GAMMA));
    mix(b.wrapping_add(counter.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng(master: u64, stream: Stream, counter: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, stream, counter))
}

/// Generator for raw user seeds (no stream separation).
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
