//! Monte-Carlo checks of the Gaussian minimum and chi-square maximum lemmas.

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::phi;
use crate::seed::{child_rng, Rng};

const CHUNK: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: f64,
    pub bound: f64,
    pub trials: usize,
    /// Binomial standard error of the estimate.
    pub std_error: f64,
}

impl McReport {
    fn new(hits: usize, trials: usize, bound: f64) -> Self {
        let p = hits as f64 / trials as f64;
        McReport {
            estimate: p,
            bound,
            trials,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `estimate <= bound + 3 * std_error`.
    pub fn within_bound(&self) -> bool {
        self.estimate <= self.bound + 3.0 * self.std_error
    }
}

/// Splits `trials` into fixed chunks with generators drawn up front, so the
/// count does not depend on the thread count.
fn count_hits<F>(trials: usize, rng: &mut Rng, event: F) -> usize
where
    F: Fn(&mut Rng) -> bool + Sync,
{
    let chunks: Vec<(usize, Rng)> = (0..trials.div_ceil(CHUNK))
        .map(|k| ((trials - k * CHUNK).min(CHUNK), child_rng(rng)))
        .collect();
    chunks
        .into_par_iter()
        .map(|(len, mut r)| (0..len).filter(|_| event(&mut r)).count())
        .sum()
}

/// `(1 - Phi(epsilon - sqrt(2 tau)))^B`.
pub fn gaussian_min_bound(tau: f64, epsilon: f64, b: usize) -> f64 {
    (1.0 - phi(epsilon - (2.0 * tau).sqrt())).powi(b as i32)
}

/// `B (c e^(1 - c))^(d / 2)`, capped at 1.
pub fn chisq_ball_bound(d: usize, b: usize, c: f64) -> f64 {
    (b as f64 * (c * (1.0 - c).exp()).powf(d as f64 / 2.0)).min(1.0)
}

/// Frequency with which the smallest of `B` projections `x' theta_b`,
/// `theta_b ~ N(0, sigma)`, exceeds the infimum of `x' theta` over the
/// ellipse `theta' sigma^-1 theta <= 2 tau` by more than `epsilon sqrt(x' sigma x)`.
pub fn mc_gaussian_min(
    sigma: &[Vec<f64>],
    probe: &[f64],
    tau: f64,
    epsilon: f64,
    b: usize,
    trials: usize,
    rng: &mut Rng,
) -> Result<McReport> {
    let d = probe.len();
    if d == 0 || sigma.len() != d || sigma.iter().any(|r| r.len() != d) {
        return Err(Error::Config("sigma must be a d x d matrix matching the probe".into()));
    }
    if b == 0 || trials == 0 || tau < 0.0 {
        return Err(Error::Config("B and trials must be positive and tau non-negative".into()));
    }
    let m = DMatrix::from_fn(d, d, |i, j| sigma[i][j]);
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Config("sigma is not positive definite".into()))?;
    let l = chol.l();
    let scale: f64 = (0..d)
        .map(|i| (0..d).map(|j| probe[i] * sigma[i][j] * probe[j]).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    let inf = -(2.0 * tau).sqrt() * scale;
    let threshold = inf + epsilon * scale;
    let hits = count_hits(trials, rng, |r| {
        let mut min = f64::INFINITY;
        let mut z = vec![0.0; d];
        for _ in 0..b {
            z.iter_mut().for_each(|v| *v = r.sample(StandardNormal));
            let proj: f64 = (0..d)
                .map(|i| probe[i] * (0..=i).map(|j| l[(i, j)] * z[j]).sum::<f64>())
                .sum();
            min = min.min(proj);
        }
        min > threshold
    });
    Ok(McReport::new(hits, trials, gaussian_min_bound(tau, epsilon, b)))
}

/// Frequency with which the largest of `B` chi-square(d) draws reaches `c d`.
pub fn mc_chisq_ball(d: usize, b: usize, c: f64, trials: usize, rng: &mut Rng) -> Result<McReport> {
    if !(c > 1.0) {
        return Err(Error::Config(format!("c = {c} must exceed 1")));
    }
    if d == 0 || b == 0 || trials == 0 {
        return Err(Error::Config("d, B and trials must be positive".into()));
    }
    let chi = ChiSquared::new(d as f64).map_err(|e| Error::Config(e.to_string()))?;
    let level = c * d as f64;
    let hits = count_hits(trials, rng, |r| (0..b).any(|_| chi.sample(r) >= level));
    Ok(McReport::new(hits, trials, chisq_ball_bound(d, b, c)))
}
