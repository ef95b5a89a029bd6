//! Fixtures shared by the benchmarks.

use ihp_core::dihp::{gen_instance, CaseMode, DihpInstance};
use ihp_core::{rng, CubeFunction};
use rand::Rng;

/// Uniform values in [-1, 1) on {0,1}^n.
pub fn random_function(n: u32, seed: u64) -> CubeFunction {
    let mut r = rng::stream(seed, n as u64);
    CubeFunction::new(n, (0..1usize << n).map(|_| r.gen_range(-1.0..1.0)).collect()).expect("n within range")
}

pub fn instance(n: u32, alpha_n: u32, players: u32, mode: CaseMode, seed: u64) -> DihpInstance {
    gen_instance(n, alpha_n, players, mode, &mut rng::stream(seed, 0)).expect("valid parameters")
}
