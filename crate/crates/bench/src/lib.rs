//! Shared inputs for the benchmarks.

use rand::{Rng as _, SeedableRng};

use cutclass::seed::Rng;
use cutclass::LabeledSet;

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// `n` uniform points in `[-1, 1]^d` labeled by a fixed half-space through
/// the origin, with a fraction `flip` of labels inverted.
pub fn linear_labels(n: usize, d: usize, flip: f64, seed: u64) -> LabeledSet {
    let mut r = rng(seed);
    let w: Vec<f64> = (0..d).map(|j| if j % 2 == 0 { 1.0 } else { -0.5 }).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| r.random_range(-1.0..=1.0)).collect())
        .collect();
    let labels = rows
        .iter()
        .map(|x| {
            let s: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            (s > 0.0) ^ (r.random::<f64>() < flip)
        })
        .collect();
    LabeledSet::new(rows, labels, None).expect("consistent rows")
}

/// `len` uniform points in `[-1, 1]^d`.
pub fn cloud(len: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..len)
        .map(|_| (0..d).map(|_| r.random_range(-1.0..=1.0)).collect())
        .collect()
}
