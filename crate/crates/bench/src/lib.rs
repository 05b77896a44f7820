//! Fixtures shared by the benchmarks.

use psl_core::search::rng_from_seed;
use psl_core::{random_sequence, BinarySequence};

/// Lengths the kernels are measured at.
pub const LENGTHS: [usize; 4] = [64, 256, 1024, 4096];

pub fn fixture(n: usize) -> BinarySequence {
    random_sequence(n, &mut rng_from_seed(n as u64)).expect("length at least 2")
}
