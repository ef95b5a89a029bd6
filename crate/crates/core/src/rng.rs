//! Seeded random streams.
//!
//! Every trial draws from its own ChaCha8 stream. The key is the 64-bit master
//! seed expanded by `SeedableRng::seed_from_u64` (PCG32 expansion, as in
//! `rand_core` 0.6); the 64-bit ChaCha stream id is the trial index. Since
//! ChaCha is counter based, stream `(seed, i)` is fixed by those two numbers
//! alone, regardless of how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Stream for trial `index` under `master_seed`.
pub fn stream(master_seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Sub-stream for a named phase of an experiment, so that two phases of the
/// same experiment never share draws.
pub fn substream(master_seed: u64, phase: u64, index: u64) -> Stream {
    stream(master_seed ^ phase.wrapping_mul(0x9E37_79B9_7F4A_7C15), index)
}
