//! Seeded random inputs for the checkers and property runs.
//!
//! Simplex points come from normalized exponential spacings, which is the
//! flat Dirichlet distribution on the simplex. The generator is ChaCha8 so a
//! seed reproduces the same stream on every platform and release.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::distributions::{product, rational_approx, Distribution, ProductSystem, Refinement};

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Raw flat-Dirichlet weights on `n` outcomes (unnormalized spacings
/// divided by their total).
pub fn flat_dirichlet_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = e.iter().sum();
        if total > 0.0 {
            return e.into_iter().map(|x| x / total).collect();
        }
    }
}

/// A uniformly distributed point of the simplex on `n >= 1` outcomes.
pub fn flat_dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Distribution {
    assert!(n >= 1, "simplex dimension must be positive");
    Distribution::new(flat_dirichlet_weights(rng, n), true).expect("spacings are positive")
}

/// Random refinement with `1..=max_blocks` blocks of `1..=max_block_len`
/// entries each; the flattened distribution is flat-Dirichlet.
pub fn random_refinement<R: Rng + ?Sized>(rng: &mut R, max_blocks: usize, max_block_len: usize) -> Refinement {
    let n = rng.random_range(1..=max_blocks);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(1..=max_block_len)).collect();
    let flat = flat_dirichlet_weights(rng, sizes.iter().sum());
    let mut rest = flat.as_slice();
    let blocks = sizes
        .iter()
        .map(|&m| {
            let (head, tail) = rest.split_at(m);
            rest = tail;
            head.to_vec()
        })
        .collect();
    Refinement::new(blocks).expect("flat Dirichlet blocks sum to one")
}

/// Random independent pair with `1..=max_len` outcomes on each side.
pub fn random_product<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> ProductSystem {
    let n = rng.random_range(1..=max_len);
    let m = rng.random_range(1..=max_len);
    let a = flat_dirichlet(rng, n);
    let b = flat_dirichlet(rng, m);
    product(&a, &b)
}

/// Integer multiplicities summing to `denominator`, obtained by rounding a
/// flat-Dirichlet point on `n` outcomes.
pub fn random_multiplicities<R: Rng + ?Sized>(rng: &mut R, n: usize, denominator: u64) -> Vec<u64> {
    let d = flat_dirichlet(rng, n);
    rational_approx(&d, denominator).expect("denominator at least n")
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
