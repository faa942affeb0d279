//! The classify-and-reweight round loop, comparison-only feedback, and random
//! search baselines.

mod baselines;
mod pairwise;
mod recorder;
mod run;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use baselines::{run_random, run_random2x};
pub use pairwise::{pairwise_labels, pairwise_labels_exhaustive};
pub use run::run_classify_opt;

use crate::classify::ClassifierSpec;
use crate::error::{Error, Result};
use crate::observe::ThresholdPolicy;
use crate::sample::{check_eta, ContinuousSamplerConfig};
use crate::trace::RunTrace;

/// Comparison-only feedback: each point is labeled by `c` random comparisons
/// against the latest batch instead of by its value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairwiseConfig {
    pub c: usize,
    /// Compare against every member of the latest batch instead of sampling.
    pub exhaustive: bool,
}

impl Default for PairwiseConfig {
    fn default() -> Self {
        PairwiseConfig { c: 10, exhaustive: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Rounds after the initial uniform batch.
    pub rounds: usize,
    pub batch_size: usize,
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub classifier: ClassifierSpec,
    #[serde(default)]
    pub threshold: ThresholdPolicy,
    #[serde(default)]
    pub sampler: ContinuousSamplerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairwise: Option<PairwiseConfig>,
}

fn default_eta() -> f64 {
    0.5
}

impl OptimizerConfig {
    pub fn new(rounds: usize, batch_size: usize, classifier: ClassifierSpec) -> Self {
        OptimizerConfig {
            rounds,
            batch_size,
            eta: default_eta(),
            classifier,
            threshold: ThresholdPolicy::default(),
            sampler: ContinuousSamplerConfig::default(),
            pairwise: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if self.batch_size < 2 {
            return Err(Error::Config("batch_size must be at least 2".into()));
        }
        check_eta(self.eta)?;
        self.classifier.validate()?;
        self.sampler.validate()?;
        if let Some(p) = &self.pairwise {
            if p.c == 0 {
                return Err(Error::Config("pairwise c must be at least 1".into()));
            }
            if self.classifier == ClassifierSpec::Oracle {
                return Err(Error::Config(
                    "the oracle classifier needs a numeric threshold and cannot use comparison feedback".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A run that stopped early, with everything recorded up to the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub partial: Box<RunTrace>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (after {} recorded rounds)", self.error, self.partial.rounds.len())
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}
