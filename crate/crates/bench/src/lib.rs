//! Shared inputs for the criterion benchmarks.

use nonext::sampling::{flat_dirichlet, random_refinement, seeded_rng};
use nonext::{Distribution, Refinement};

pub const BENCH_SEED: u64 = 0x5eed;

/// Flat-Dirichlet distributions of the requested sizes, one per size.
pub fn distributions(sizes: &[usize]) -> Vec<Distribution> {
    let mut rng = seeded_rng(BENCH_SEED);
    sizes.iter().map(|&n| flat_dirichlet(&mut rng, n)).collect()
}

pub fn refinements(count: usize) -> Vec<Refinement> {
    let mut rng = seeded_rng(BENCH_SEED);
    (0..count).map(|_| random_refinement(&mut rng, 8, 8)).collect()
}
