//! Empirical abstention mass of a selective classifier.

use rayon::prelude::*;

use crate::classify::{Decision, SoftLabeler};
use crate::seed::Rng;
use crate::space::BoxSpace;

/// Fraction of `probes` on which `h` abstains.
pub fn abstention_rate(h: &dyn SoftLabeler, probes: &[Vec<f64>]) -> f64 {
    if probes.is_empty() {
        return 0.0;
    }
    let n = probes.par_iter().filter(|x| h.decide(x) == Decision::Abstain).count();
    n as f64 / probes.len() as f64
}

/// Abstention rate under `m` uniform probes from a box.
pub fn abstention_rate_uniform(h: &dyn SoftLabeler, space: &BoxSpace, m: usize, rng: &mut Rng) -> f64 {
    let probes: Vec<Vec<f64>> = (0..m).map(|_| space.sample_uniform(rng)).collect();
    abstention_rate(h, &probes)
}
