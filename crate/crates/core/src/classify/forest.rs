//! Bagged tree ensembles with a consensus vote.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, TreeParams};
use super::{Decision, Learner, SoftLabeler};
use crate::error::{Error, Result};
use crate::observe::LabeledSet;
use crate::seed::{child_rng, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeEnsembleConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Fraction of features examined per split; `None` means `floor(sqrt(d))` features.
    pub feature_fraction: Option<f64>,
    pub bootstrap_rows: bool,
    /// Vote share needed for a definite `Cut` or `Keep`.
    pub consensus_tau: f64,
}

impl Default for TreeEnsembleConfig {
    fn default() -> Self {
        TreeEnsembleConfig {
            n_trees: 100,
            max_depth: None,
            min_leaf: 1,
            feature_fraction: None,
            bootstrap_rows: true,
            consensus_tau: 0.75,
        }
    }
}

impl TreeEnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be at least 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::Config("min_leaf must be at least 1".into()));
        }
        if let Some(f) = self.feature_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Config(format!("feature_fraction {f} not in (0, 1]")));
            }
        }
        if !(self.consensus_tau > 0.5 && self.consensus_tau <= 1.0) {
            return Err(Error::Config(format!(
                "consensus_tau {} not in (0.5, 1]",
                self.consensus_tau
            )));
        }
        Ok(())
    }

    pub fn features_per_split(&self, dim: usize) -> usize {
        let k = match self.feature_fraction {
            Some(f) => (f * dim as f64 + 1e-9).floor() as usize,
            None => (dim as f64).sqrt().floor() as usize,
        };
        k.clamp(1, dim.max(1))
    }
}

/// `Cut` when at least `tau` of the trees vote 1, `Keep` when at least `tau`
/// vote 0, otherwise `Abstain`.
pub fn consensus_decide(votes_cut: usize, n: usize, tau: f64) -> Decision {
    if n == 0 {
        return Decision::Abstain;
    }
    let share = votes_cut as f64 / n as f64;
    if share >= tau {
        Decision::Cut
    } else if 1.0 - share >= tau {
        Decision::Keep
    } else {
        Decision::Abstain
    }
}

#[derive(Debug, Clone)]
pub struct TreeEnsemble {
    pub trees: Vec<DecisionTree>,
    pub tau: f64,
}

impl TreeEnsemble {
    pub fn votes(&self, x: &[f64]) -> usize {
        self.trees.iter().filter(|t| t.predict(x)).count()
    }
}

impl SoftLabeler for TreeEnsemble {
    fn decide(&self, x: &[f64]) -> Decision {
        consensus_decide(self.votes(x), self.trees.len(), self.tau)
    }
}

/// Per-tree generators are drawn from `rng` in tree order, so the result does
/// not depend on how many threads fit the trees.
pub fn fit_tree_ensemble(
    data: &LabeledSet,
    cfg: &TreeEnsembleConfig,
    rng: &mut Rng,
) -> Result<TreeEnsemble> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let params = TreeParams {
        max_depth: cfg.max_depth,
        min_leaf: cfg.min_leaf,
        features_per_split: cfg.features_per_split(data.dim()),
    };
    let n = data.len();
    let mut seeds: Vec<Rng> = (0..cfg.n_trees).map(|_| child_rng(rng)).collect();
    let trees = seeds
        .par_iter_mut()
        .map(|r| {
            let rows = if cfg.bootstrap_rows {
                (0..n).map(|_| r.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(&data.rows, &data.labels, rows, &params, r)
        })
        .collect();
    Ok(TreeEnsemble {
        trees,
        tau: cfg.consensus_tau,
    })
}

impl Learner for TreeEnsembleConfig {
    fn fit(&self, data: &LabeledSet, rng: &mut Rng) -> Result<Box<dyn SoftLabeler>> {
        Ok(Box::new(fit_tree_ensemble(data, self, rng)?))
    }
}
