//! Derivative-free optimization of black-box functions from large batches of
//! parallel queries.
//!
//! Each round fits a classifier that predicts which points lie above the
//! current threshold (the median of the latest batch), multiplicatively
//! downweights those points in the proposal distribution, and draws the next
//! batch from it. The crate provides:
//!
//! * [`space`], [`observe`], [`trace`], [`seed`]: the shared domain model.
//! * [`objectives`]: synthetic benchmarks, DNA-binding style lookup problems
//!   and an external-process adapter.
//! * [`classify`]: consensus tree ensembles, multiplier-bootstrap linear
//!   ensembles, exact consistent selective classification for linear
//!   hypotheses and a perfect sublevel oracle.
//! * [`sample`]: exact multiplicative weights over finite spaces and a
//!   Gaussian-perturbation importance sampler for boxes.
//! * [`optimize`]: the round loop, pairwise-comparison feedback and random
//!   search baselines.
//! * [`theory`]: numerical checks of the convergence bounds and the Gaussian
//!   sampling lemmas behind the bootstrap.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod objectives;
pub mod observe;
pub mod optimize;
pub mod sample;
pub mod seed;
pub mod space;
pub mod theory;
pub mod trace;

pub(crate) mod linalg;
pub(crate) mod lp;

pub use crate::classify::{Decision, Learner, SoftLabeler};
pub use crate::error::{Error, Result};
pub use crate::objectives::Objective;
pub use crate::observe::{median_threshold, population_threshold, relabel_history, LabeledSet, Observation, ThresholdPolicy};
pub use crate::optimize::{run_classify_opt, run_random, run_random2x, OptimizerConfig, RunFailure};
pub use crate::seed::SeedPolicy;
pub use crate::space::{ActionSpace, BoxSpace, DiscreteSpace};
pub use crate::trace::{best_so_far, RoundRecord, RunTrace};
