//! Multiplicative weights over a finite action set, kept in log space.

use rand::Rng as _;
use rayon::prelude::*;

use crate::classify::SoftLabeler;
use crate::error::{Error, Result};
use crate::linalg::log_sum_exp;
use crate::seed::Rng;
use crate::space::DiscreteSpace;

pub fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=0.5).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Config(format!("eta {eta} not in [0, 1/2]")))
    }
}

/// `effective_h` of `h` at every point of the space, in point order.
pub fn cut_mask(h: &dyn SoftLabeler, space: &DiscreteSpace) -> Vec<bool> {
    (0..space.len())
        .into_par_iter()
        .map(|i| h.effective_h(space.point(i)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWeights {
    log_w: Vec<f64>,
    eta: f64,
}

impl DiscreteWeights {
    pub fn uniform(len: usize, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if len == 0 {
            return Err(Error::Space("no points to weight".into()));
        }
        Ok(DiscreteWeights {
            log_w: vec![0.0; len],
            eta,
        })
    }

    /// Starts from arbitrary (unnormalized) log-weights.
    pub fn from_log_weights(log_w: Vec<f64>, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if log_w.is_empty() {
            return Err(Error::Space("no points to weight".into()));
        }
        if log_w.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::Config("log-weights must be finite or -inf".into()));
        }
        Ok(DiscreteWeights { log_w, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn len(&self) -> usize {
        self.log_w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_w.is_empty()
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    pub fn log_normalizer(&self) -> f64 {
        log_sum_exp(&self.log_w)
    }

    pub fn log_prob(&self, i: usize) -> f64 {
        self.log_w[i] - self.log_normalizer()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let z = self.log_normalizer();
        self.log_w.iter().map(|l| (l - z).exp()).collect()
    }

    /// Mass of the masked points under the current distribution.
    pub fn coverage(&self, mask: &[bool]) -> f64 {
        let z = self.log_normalizer();
        let c: f64 = self
            .log_w
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(l, _)| (l - z).exp())
            .sum();
        c.clamp(0.0, 1.0)
    }

    /// Multiplies the masked weights by `1 - eta`.
    pub fn update_mask(&mut self, mask: &[bool]) {
        let step = (1.0 - self.eta).ln();
        for (l, &m) in self.log_w.iter_mut().zip(mask) {
            if m {
                *l += step;
            }
        }
    }

    /// Applies one classifier: returns its cut mask and the coverage it had
    /// under the weights before the update.
    pub fn mw_update(&mut self, h: &dyn SoftLabeler, space: &DiscreteSpace) -> (Vec<bool>, f64) {
        let mask = cut_mask(h, space);
        let gamma = self.coverage(&mask);
        self.update_mask(&mask);
        (mask, gamma)
    }

    /// `n` independent inverse-CDF draws, returned as point indices.
    pub fn draw(&self, n: usize, rng: &mut Rng) -> Result<Vec<usize>> {
        let top = self.log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::DegenerateDistribution);
        }
        let mut cdf = Vec::with_capacity(self.log_w.len());
        let mut acc = 0.0;
        for l in &self.log_w {
            acc += (l - top).exp();
            cdf.push(acc);
        }
        let last = cdf.len() - 1;
        Ok((0..n)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                cdf.partition_point(|&c| c <= u).min(last)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn two_point_update() {
        let mut w = DiscreteWeights::uniform(2, 0.5).unwrap();
        w.update_mask(&[true, false]);
        let p = w.probabilities();
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_cut_is_identity() {
        let mut w = DiscreteWeights::uniform(3, 0.5).unwrap();
        let before = w.clone();
        w.update_mask(&[false; 3]);
        assert_eq!(w, before);
    }

    #[test]
    fn eta_range() {
        assert!(DiscreteWeights::uniform(2, 0.6).is_err());
        assert!(DiscreteWeights::uniform(2, -0.1).is_err());
        assert!(DiscreteWeights::uniform(2, 0.0).is_ok());
    }

    #[test]
    fn coverage_counts() {
        let w = DiscreteWeights::uniform(4, 0.5).unwrap();
        assert_eq!(w.coverage(&[true; 4]), 1.0);
        assert_eq!(w.coverage(&[false; 4]), 0.0);
        assert!((w.coverage(&[true, false, true, false]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_mass_and_degenerate() {
        let mut rng = Rng::seed_from_u64(1);
        let w = DiscreteWeights::from_log_weights(vec![f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY], 0.5).unwrap();
        assert!(w.draw(50, &mut rng).unwrap().iter().all(|&i| i == 1));
        let dead = DiscreteWeights::from_log_weights(vec![f64::NEG_INFINITY; 2], 0.5).unwrap();
        assert!(matches!(dead.draw(1, &mut rng), Err(Error::DegenerateDistribution)));
    }
}
