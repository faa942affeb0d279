//! Multiplier-bootstrap ensembles of logistic fits.
//!
//! Each replicate refits with weights `1 + u_i`, `u_i ~ U[-1, 1]`, and its
//! deviation from the base fit is scaled by `sigma`. The resulting linear
//! classifiers vote unanimously or abstain.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::logistic::{fit_weighted_logistic, LogisticFit};
use super::{ConstantLabeler, Decision, Learner, SoftLabeler};
use crate::error::{Error, Result};
use crate::linalg::{augment, dot};
use crate::observe::LabeledSet;
use crate::seed::Rng;

const MAX_RETRIES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapLinearConfig {
    /// Number of bootstrap replicates.
    pub b: usize,
    /// Perturbation scale; `None` means `sqrt(d) + 1`.
    pub sigma: Option<f64>,
    pub ridge: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BootstrapLinearConfig {
    fn default() -> Self {
        BootstrapLinearConfig {
            b: default_replicates(0.05),
            sigma: None,
            ridge: 1e-3,
            tol: 1e-6,
            max_iter: 200,
        }
    }
}

/// `ceil(15 ln(3 / delta))`.
pub fn default_replicates(delta: f64) -> usize {
    (15.0 * (3.0 / delta).ln()).ceil() as usize
}

impl BootstrapLinearConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::Config("b must be at least 1".into()));
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("sigma {s} must be positive")));
            }
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(Error::Config(format!("ridge {} must be non-negative", self.ridge)));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Config("tol must be positive and max_iter at least 1".into()));
        }
        Ok(())
    }

    pub fn sigma_for(&self, dim: usize) -> f64 {
        self.sigma.unwrap_or((dim as f64).sqrt() + 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct BootstrapEnsemble {
    pub theta_hat: Vec<f64>,
    pub thetas: Vec<Vec<f64>>,
}

fn class_weights_ok(labels: &[bool], u: &[f64]) -> bool {
    let (mut pos, mut neg) = (0.0, 0.0);
    for (&z, &ui) in labels.iter().zip(u) {
        if z {
            pos += 1.0 + ui;
        } else {
            neg += 1.0 + ui;
        }
    }
    pos > 1e-12 && neg > 1e-12
}

/// Refits with the given multiplier vectors and returns the scaled replicates.
/// Rows are raw features; the bias coordinate is appended internally.
pub fn bootstrap_from_multipliers(
    data: &LabeledSet,
    theta_hat: &[f64],
    multipliers: &[Vec<f64>],
    sigma: f64,
    cfg: &BootstrapLinearConfig,
) -> Result<Vec<Vec<f64>>> {
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| augment(r)).collect();
    multipliers
        .par_iter()
        .map(|u| {
            if u.len() != x.len() {
                return Err(Error::Config(format!(
                    "multiplier vector has length {}, expected {}",
                    u.len(),
                    x.len()
                )));
            }
            if !class_weights_ok(&data.labels, u) {
                return Err(Error::DegenerateBootstrap { retries: 0 });
            }
            let w: Vec<f64> = u.iter().map(|ui| 1.0 + ui).collect();
            let LogisticFit { theta, .. } =
                fit_weighted_logistic(&x, &data.labels, &w, cfg.ridge, cfg.tol, cfg.max_iter, Some(theta_hat))?;
            Ok(theta
                .iter()
                .zip(theta_hat)
                .map(|(t, h)| sigma * (t - h) + h)
                .collect())
        })
        .collect()
}

pub fn multiplier_bootstrap(
    data: &LabeledSet,
    cfg: &BootstrapLinearConfig,
    rng: &mut Rng,
) -> Result<BootstrapEnsemble> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| augment(r)).collect();
    let ones = vec![1.0; x.len()];
    let theta_hat = fit_weighted_logistic(&x, &data.labels, &ones, cfg.ridge, cfg.tol, cfg.max_iter, None)?.theta;

    let mut multipliers = Vec::with_capacity(cfg.b);
    for _ in 0..cfg.b {
        let mut tries = 0;
        loop {
            let u: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
            if class_weights_ok(&data.labels, &u) {
                multipliers.push(u);
                break;
            }
            tries += 1;
            if tries > MAX_RETRIES {
                return Err(Error::DegenerateBootstrap { retries: MAX_RETRIES });
            }
        }
    }
    let thetas = bootstrap_from_multipliers(data, &theta_hat, &multipliers, cfg.sigma_for(data.dim()), cfg)?;
    Ok(BootstrapEnsemble { theta_hat, thetas })
}

/// `Cut` if every score is positive, `Keep` if every score is non-positive.
pub fn consensus_linear(thetas: &[Vec<f64>], x_aug: &[f64]) -> Decision {
    let pos = thetas.iter().filter(|t| dot(t, x_aug) > 0.0).count();
    if pos == thetas.len() {
        Decision::Cut
    } else if pos == 0 {
        Decision::Keep
    } else {
        Decision::Abstain
    }
}

#[derive(Debug, Clone)]
pub struct BootstrapLinearClassifier {
    pub thetas: Vec<Vec<f64>>,
}

impl SoftLabeler for BootstrapLinearClassifier {
    fn decide(&self, x: &[f64]) -> Decision {
        consensus_linear(&self.thetas, &augment(x))
    }
}

impl Learner for BootstrapLinearConfig {
    fn fit(&self, data: &LabeledSet, rng: &mut Rng) -> Result<Box<dyn SoftLabeler>> {
        let pos = data.count_positive();
        if pos == 0 {
            return Ok(Box::new(ConstantLabeler(Decision::Keep)));
        }
        if pos == data.len() {
            return Ok(Box::new(ConstantLabeler(Decision::Cut)));
        }
        let ens = multiplier_bootstrap(data, self, rng)?;
        Ok(Box::new(BootstrapLinearClassifier { thetas: ens.thetas }))
    }
}
