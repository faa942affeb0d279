//! Uniform random search with `n` or `2n` points per round.

use rand::Rng as _;

use super::recorder::{Batch, Recorder, RoundExtras};
use super::RunFailure;
use crate::error::Error;
use crate::objectives::Objective;
use crate::seed::SeedPolicy;
use crate::space::ActionSpace;
use crate::trace::RunTrace;

fn run_uniform(
    objective: &dyn Objective,
    space: &ActionSpace,
    n: usize,
    rounds: usize,
    seed: SeedPolicy,
    method: &str,
) -> Result<RunTrace, RunFailure> {
    let config = serde_json::json!({ "batch_size": n, "rounds": rounds });
    let mut rec = Recorder::new(objective, space, method, seed, config).map_err(|error| RunFailure {
        error,
        partial: Box::new(RunTrace::new(crate::trace::TraceHeader {
            method: method.to_string(),
            seed,
            space: space.summary(),
            config: serde_json::Value::Null,
        })),
    })?;
    if n == 0 || rounds == 0 {
        return Err(rec.fail(Error::Config("batch size and rounds must be positive".into())));
    }
    let mut rng = seed.rng();
    for t in 1..=rounds {
        let batch = match space {
            ActionSpace::Discrete(ds) => Batch::Indices((0..n).map(|_| rng.random_range(0..ds.len())).collect()),
            ActionSpace::Box(b) => Batch::Points((0..n).map(|_| b.sample_uniform(&mut rng)).collect()),
        };
        if let Err(e) = rec.evaluate_round(t, batch, RoundExtras::default()) {
            return Err(rec.fail(e.at_round(t)));
        }
    }
    Ok(rec.finish())
}

/// `rounds` batches of `n` uniform draws; rounds are numbered from 1.
pub fn run_random(
    objective: &dyn Objective,
    space: &ActionSpace,
    n: usize,
    rounds: usize,
    seed: SeedPolicy,
) -> Result<RunTrace, RunFailure> {
    run_uniform(objective, space, n, rounds, seed, "random")
}

/// Random search with twice the batch size.
pub fn run_random2x(
    objective: &dyn Objective,
    space: &ActionSpace,
    n: usize,
    rounds: usize,
    seed: SeedPolicy,
) -> Result<RunTrace, RunFailure> {
    run_uniform(objective, space, 2 * n, rounds, seed, "random-2x")
}
