//! Proposal distributions: exact multiplicative weights over finite spaces and
//! a particle approximation over boxes.

mod continuous;
mod discrete;

pub use continuous::{
    draw_continuous, ContinuousDraw, ContinuousSamplerConfig, ImportanceWeighting, ParticleState,
};
pub use discrete::{check_eta, cut_mask, DiscreteWeights};
