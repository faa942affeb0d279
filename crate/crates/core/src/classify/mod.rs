//! Sublevel-set classifiers.
//!
//! Every classifier answers `Cut` (predicted above the threshold), `Keep`, or
//! `Abstain`. The proposal update only ever downweights `Cut` points; an
//! abstention is treated exactly like `Keep`.

mod bootstrap;
mod css;
mod forest;
mod logistic;
mod oracle;
mod tree;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bootstrap::{
    bootstrap_from_multipliers, consensus_linear, multiplier_bootstrap, BootstrapEnsemble,
    BootstrapLinearClassifier, BootstrapLinearConfig,
};
pub use css::{css_linear_decide, CssLinear, CssLinearLearner, VersionSpaceDecision, CSS_MARGIN_EPS};
pub use forest::{consensus_decide, fit_tree_ensemble, TreeEnsemble, TreeEnsembleConfig};
pub use logistic::{fit_logistic_mle, fit_weighted_logistic, logistic_gradient, logistic_objective, LogisticFit};
pub use oracle::{OracleLearner, OracleSublevel};
pub use tree::{DecisionTree, TreeParams};

use crate::error::Result;
use crate::objectives::Objective;
use crate::observe::LabeledSet;
use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Cut,
    Keep,
    Abstain,
}

impl Decision {
    /// The multiplicative-weights indicator: 1 only for a definite cut.
    pub fn effective_h(self) -> bool {
        self == Decision::Cut
    }
}

/// A fitted sublevel classifier. `decide` is deterministic.
pub trait SoftLabeler: Send + Sync {
    fn decide(&self, x: &[f64]) -> Decision;

    fn effective_h(&self, x: &[f64]) -> bool {
        self.decide(x).effective_h()
    }
}

/// Something that fits a [`SoftLabeler`] to labeled data.
pub trait Learner: Send + Sync {
    fn fit(&self, data: &LabeledSet, rng: &mut Rng) -> Result<Box<dyn SoftLabeler>>;
}

/// Returns the same decision everywhere.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLabeler(pub Decision);

impl SoftLabeler for ConstantLabeler {
    fn decide(&self, _x: &[f64]) -> Decision {
        self.0
    }
}

/// Serializable classifier choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ClassifierSpec {
    TreeEnsemble(TreeEnsembleConfig),
    BootstrapLinear(BootstrapLinearConfig),
    CssLinear,
    Oracle,
}

impl ClassifierSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ClassifierSpec::TreeEnsemble(c) => c.validate(),
            ClassifierSpec::BootstrapLinear(c) => c.validate(),
            ClassifierSpec::CssLinear | ClassifierSpec::Oracle => Ok(()),
        }
    }

    /// The oracle needs the objective itself; the others ignore it.
    pub fn learner(&self, objective: Arc<dyn Objective>) -> Box<dyn Learner> {
        match self {
            ClassifierSpec::TreeEnsemble(c) => Box::new(c.clone()),
            ClassifierSpec::BootstrapLinear(c) => Box::new(c.clone()),
            ClassifierSpec::CssLinear => Box::new(CssLinearLearner),
            ClassifierSpec::Oracle => Box::new(OracleLearner::new(objective)),
        }
    }
}
