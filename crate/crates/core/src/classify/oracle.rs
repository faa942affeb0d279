//! The exact sublevel-set classifier `x -> f(x) > alpha`.

use std::sync::Arc;

use super::{Decision, Learner, SoftLabeler};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::observe::LabeledSet;
use crate::seed::Rng;

pub struct OracleSublevel {
    objective: Arc<dyn Objective>,
    alpha: f64,
}

impl OracleSublevel {
    pub fn new(objective: Arc<dyn Objective>, alpha: f64) -> Self {
        OracleSublevel { objective, alpha }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl SoftLabeler for OracleSublevel {
    /// Points the objective cannot evaluate are kept.
    fn decide(&self, x: &[f64]) -> Decision {
        match self.objective.evaluate(x) {
            Ok(y) if y > self.alpha => Decision::Cut,
            Ok(_) => Decision::Keep,
            Err(e) => {
                log::warn!("oracle classifier could not evaluate a point: {e}");
                Decision::Keep
            }
        }
    }
}

/// Fitting reads the threshold recorded on the labeled set and nothing else.
pub struct OracleLearner {
    objective: Arc<dyn Objective>,
}

impl OracleLearner {
    pub fn new(objective: Arc<dyn Objective>) -> Self {
        OracleLearner { objective }
    }
}

impl Learner for OracleLearner {
    fn fit(&self, data: &LabeledSet, _rng: &mut Rng) -> Result<Box<dyn SoftLabeler>> {
        let alpha = data
            .alpha
            .ok_or_else(|| Error::Config("oracle classifier needs a labeled set with a recorded threshold".into()))?;
        Ok(Box::new(OracleSublevel::new(self.objective.clone(), alpha)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::SyntheticObjective;

    #[test]
    fn strict_threshold() {
        let f: Arc<dyn Objective> = Arc::new(SyntheticObjective::RandomLinear { w: vec![1.0] });
        let h = OracleSublevel::new(f, 0.0);
        assert_eq!(h.decide(&[1.0]), Decision::Cut);
        assert_eq!(h.decide(&[0.0]), Decision::Keep);
        assert_eq!(h.decide(&[-0.5]), Decision::Keep);
    }
}
