//! Labels from pairwise comparisons `g(a, b) = 1{f(a) < f(b)}`.

use rand::Rng as _;

use crate::seed::Rng;

/// For each target, draws `c` comparators uniformly (with replacement) from
/// `comparators` and labels the target 1 when more than half of them beat it.
pub fn pairwise_labels(targets: &[f64], comparators: &[f64], c: usize, rng: &mut Rng) -> Vec<bool> {
    targets
        .iter()
        .map(|&y| {
            let wins = (0..c)
                .filter(|_| comparators[rng.random_range(0..comparators.len())] < y)
                .count();
            2 * wins > c
        })
        .collect()
}

/// Compares every target against every comparator.
pub fn pairwise_labels_exhaustive(targets: &[f64], comparators: &[f64]) -> Vec<bool> {
    targets
        .iter()
        .map(|&y| 2 * comparators.iter().filter(|&&v| v < y).count() > comparators.len())
        .collect()
}
