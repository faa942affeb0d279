//! The main loop: threshold, relabel, fit, reweight, draw, evaluate.

use std::sync::Arc;

use super::pairwise::{pairwise_labels, pairwise_labels_exhaustive};
use super::recorder::{Batch, Recorder, RoundExtras};
use super::{OptimizerConfig, RunFailure};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::objectives::eval_batch;
use crate::observe::{median_threshold, population_threshold, relabel_history, LabeledSet, ThresholdPolicy};
use crate::sample::{DiscreteWeights, ParticleState};
use crate::seed::{Rng, SeedPolicy};
use crate::space::ActionSpace;
use crate::trace::{encode_mask, RunTrace, TraceHeader};

enum Proposal {
    Discrete(DiscreteWeights),
    Particles(ParticleState),
}

fn labeled_set(
    rec: &Recorder<'_>,
    cfg: &OptimizerConfig,
    population: Option<(&[f64], &DiscreteWeights)>,
    rng: &mut Rng,
) -> Result<LabeledSet> {
    let history = rec.history();
    if let Some(p) = &cfg.pairwise {
        let targets: Vec<f64> = history.iter().map(|o| o.y).collect();
        let pool: Vec<f64> = rec.latest().iter().map(|o| o.y).collect();
        let labels = if p.exhaustive {
            pairwise_labels_exhaustive(&targets, &pool)
        } else {
            pairwise_labels(&targets, &pool, p.c, rng)
        };
        let rows = history.iter().map(|o| o.x.clone()).collect();
        return LabeledSet::new(rows, labels, None);
    }
    let alpha = match (cfg.threshold, population) {
        (ThresholdPolicy::LatestBatch, _) => median_threshold(&rec.latest().iter().map(|o| o.y).collect::<Vec<_>>())?,
        (ThresholdPolicy::AllHistory, _) => median_threshold(&history.iter().map(|o| o.y).collect::<Vec<_>>())?,
        (ThresholdPolicy::PopulationMedian, Some((values, w))) => population_threshold(values, &w.probabilities())?,
        (ThresholdPolicy::PopulationMedian, None) => {
            return Err(Error::Config("the population-median threshold needs a finite space".into()))
        }
    };
    relabel_history(history, alpha)
}

/// Runs `cfg.rounds` rounds after an initial uniform batch, so the objective
/// is evaluated `batch_size * (rounds + 1)` times.
pub fn run_classify_opt(
    objective: Arc<dyn Objective>,
    space: &ActionSpace,
    cfg: &OptimizerConfig,
    seed: SeedPolicy,
) -> Result<RunTrace, RunFailure> {
    let early = |error: Error| RunFailure {
        error,
        partial: Box::new(RunTrace::new(TraceHeader {
            method: "classify".into(),
            seed,
            space: space.summary(),
            config: serde_json::Value::Null,
        })),
    };
    cfg.validate().map_err(early)?;
    let config = serde_json::to_value(cfg).map_err(|e| early(e.into()))?;
    let mut rec = Recorder::new(objective.as_ref(), space, "classify", seed, config).map_err(early)?;
    let learner = cfg.classifier.learner(objective.clone());
    let mut rng = seed.rng();
    let n = cfg.batch_size;

    let mut proposal = match space {
        ActionSpace::Discrete(ds) => match DiscreteWeights::uniform(ds.len(), cfg.eta) {
            Ok(w) => Proposal::Discrete(w),
            Err(e) => return Err(rec.fail(e)),
        },
        ActionSpace::Box(b) => match ParticleState::new(b.clone(), cfg.eta, cfg.sampler.clone()) {
            Ok(s) => Proposal::Particles(s),
            Err(e) => return Err(rec.fail(e)),
        },
    };

    let population_values = match (cfg.threshold, space) {
        (ThresholdPolicy::PopulationMedian, ActionSpace::Discrete(ds)) => {
            let points: Vec<Vec<f64>> = ds.points().map(<[f64]>::to_vec).collect();
            match eval_batch(objective.as_ref(), &points) {
                Ok(v) => Some(v),
                Err(e) => return Err(rec.fail(e)),
            }
        }
        (ThresholdPolicy::PopulationMedian, ActionSpace::Box(_)) => {
            return Err(rec.fail(Error::Config("the population-median threshold needs a finite space".into())))
        }
        _ => None,
    };

    for t in 0..=cfg.rounds {
        let step = (|| -> Result<()> {
            let mut extras = RoundExtras::default();
            if t > 0 {
                let population = match (&population_values, &proposal) {
                    (Some(v), Proposal::Discrete(w)) => Some((v.as_slice(), w)),
                    _ => None,
                };
                let data = labeled_set(&rec, cfg, population, &mut rng)?;
                extras.alpha = data.alpha;
                let h = learner.fit(&data, &mut rng)?;
                match &mut proposal {
                    Proposal::Discrete(w) => {
                        let ActionSpace::Discrete(ds) = space else { unreachable!() };
                        let (mask, gamma) = w.mw_update(h.as_ref(), ds);
                        extras.coverage = Some(gamma);
                        extras.cut_mask = Some(encode_mask(&mask));
                    }
                    Proposal::Particles(s) => {
                        s.set_latest_batch(rec.latest().iter().map(|o| o.x.clone()).collect());
                        s.push_classifier(h);
                    }
                }
            }
            let batch = match &mut proposal {
                Proposal::Discrete(w) => Batch::Indices(w.draw(n, &mut rng)?),
                Proposal::Particles(s) => {
                    let draw = s.draw(n, &mut rng)?;
                    if t > 0 {
                        extras.coverage = draw.coverage;
                        extras.bandwidth = Some(draw.bandwidth);
                        extras.notes.extend(draw.notes);
                    }
                    Batch::Points(draw.points)
                }
            };
            rec.evaluate_round(t, batch, extras)
        })();
        if let Err(e) = step {
            return Err(rec.fail(e.at_round(t)));
        }
    }
    Ok(rec.finish())
}
