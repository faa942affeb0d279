//! Shared bookkeeping: evaluates batches, keeps the observation history and
//! builds the trace.

use crate::error::{Error, Result};
use crate::objectives::{eval_batch, Objective};
use crate::observe::Observation;
use crate::seed::SeedPolicy;
use crate::space::ActionSpace;
use crate::trace::{Incumbent, RoundRecord, RunResult, RunTrace, TraceHeader};

use super::RunFailure;

pub(crate) enum Batch {
    Indices(Vec<usize>),
    Points(Vec<Vec<f64>>),
}

#[derive(Default)]
pub(crate) struct RoundExtras {
    pub alpha: Option<f64>,
    pub coverage: Option<f64>,
    pub cut_mask: Option<String>,
    pub bandwidth: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

pub(crate) struct Recorder<'a> {
    objective: &'a dyn Objective,
    space: &'a ActionSpace,
    trace: RunTrace,
    history: Vec<Observation>,
    latest_start: usize,
    best: Option<Incumbent>,
}

impl<'a> Recorder<'a> {
    pub fn new(
        objective: &'a dyn Objective,
        space: &'a ActionSpace,
        method: &str,
        seed: SeedPolicy,
        config: serde_json::Value,
    ) -> Result<Self> {
        if objective.dim() != space.dim() {
            return Err(Error::Config(format!(
                "objective dimension {} does not match space dimension {}",
                objective.dim(),
                space.dim()
            )));
        }
        let trace = RunTrace::new(TraceHeader {
            method: method.to_string(),
            seed,
            space: space.summary(),
            config,
        });
        Ok(Recorder {
            objective,
            space,
            trace,
            history: Vec::new(),
            latest_start: 0,
            best: None,
        })
    }

    pub fn history(&self) -> &[Observation] {
        &self.history
    }

    pub fn latest(&self) -> &[Observation] {
        &self.history[self.latest_start..]
    }

    pub fn evaluate_round(&mut self, t: usize, batch: Batch, extras: RoundExtras) -> Result<()> {
        let (points, indices) = match batch {
            Batch::Indices(idx) => {
                let ActionSpace::Discrete(ds) = self.space else {
                    return Err(Error::Space("index batch on a continuous space".into()));
                };
                (idx.iter().map(|&i| ds.point(i).to_vec()).collect::<Vec<_>>(), Some(idx))
            }
            Batch::Points(p) => (p, None),
        };
        let values = eval_batch(self.objective, &points)?;
        self.latest_start = self.history.len();
        for (k, (x, &y)) in points.iter().zip(&values).enumerate() {
            let index = indices.as_ref().map(|v| v[k]);
            self.history.push(Observation::new(x.clone(), index, y)?);
            if self.best.as_ref().is_none_or(|b| y < b.value) {
                self.best = Some(self.incumbent(x, index, y, t));
            }
        }
        let best_so_far = self.best.as_ref().map_or(f64::INFINITY, |b| b.value);
        let store_points = indices.is_none();
        self.trace.rounds.push(RoundRecord {
            t,
            points: if store_points { points } else { Vec::new() },
            indices,
            values,
            alpha: extras.alpha,
            coverage: extras.coverage,
            best_so_far,
            cut_mask: extras.cut_mask,
            bandwidth: extras.bandwidth,
            notes: extras.notes,
        });
        Ok(())
    }

    fn incumbent(&self, x: &[f64], index: Option<usize>, y: f64, round: usize) -> Incumbent {
        Incumbent {
            value: y,
            round,
            point: index.is_none().then(|| x.to_vec()),
            index,
        }
    }

    pub fn finish(mut self) -> RunTrace {
        let round = self.trace.rounds.last().map_or(0, |r| r.t);
        let final_argmin = self
            .latest()
            .iter()
            .fold(None::<&Observation>, |acc, o| match acc {
                Some(a) if a.y <= o.y => Some(a),
                _ => Some(o),
            })
            .map(|o| self.incumbent(&o.x, o.index, o.y, round));
        if let (Some(final_argmin), Some(overall_best)) = (final_argmin, self.best.clone()) {
            self.trace.result = Some(RunResult {
                final_argmin,
                overall_best,
                total_evaluations: self.history.len(),
            });
        }
        self.trace
    }

    pub fn fail(self, error: Error) -> RunFailure {
        RunFailure {
            error,
            partial: Box::new(self.trace),
        }
    }
}
