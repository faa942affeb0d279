//! Numerical checks of the convergence bounds and of the Gaussian sampling
//! lemmas behind the bootstrap ensembles.

mod abstention;
mod bounds;
mod montecarlo;
mod verify;

pub use abstention::{abstention_rate, abstention_rate_uniform};
pub use bounds::{corollary_eta_and_bound, exact_classifier_bound, thm1_lower_bound};
pub use montecarlo::{gaussian_min_bound, chisq_ball_bound, mc_chisq_ball, mc_gaussian_min, McReport};
pub use verify::{log_prob_trajectory, verify_thm1, BoundReport, BoundRow, SLACK_TOLERANCE};
