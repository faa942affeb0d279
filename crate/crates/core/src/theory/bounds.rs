//! Closed-form bounds on the log-probability of a fixed point.

use crate::error::{Error, Result};

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=0.5).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Config(format!("eta {eta} not in [0, 1/2]")))
    }
}

pub(crate) fn thm1_formula(gamma: f64, eta: f64, rounds: usize, m: usize, card: usize) -> f64 {
    gamma * eta / (eta + 2.0) * rounds as f64 - eta * (eta + 1.0) * m as f64 - (2.0 * card as f64).ln()
}

/// `gamma eta / (eta + 2) T - eta (eta + 1) M - log(2 |X|)`: a lower bound on
/// `log p^(T)(x)` when every round cuts at least `gamma` of the mass and `x`
/// was cut in `M` of the `T` rounds.
pub fn thm1_lower_bound(gamma: f64, eta: f64, rounds: usize, m: usize, card: usize) -> Result<f64> {
    check_eta(eta)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Config(format!("gamma {gamma} not in (0, 1]")));
    }
    if m > rounds {
        return Err(Error::Config(format!("M = {m} exceeds T = {rounds}")));
    }
    if card == 0 {
        return Err(Error::Config("|X| must be positive".into()));
    }
    Ok(thm1_formula(gamma, eta, rounds, m, card))
}

/// The step size that optimizes the bound when `M <= q gamma T`, and the
/// resulting bound.
pub fn corollary_eta_and_bound(q: f64, gamma: f64, rounds: usize, card: usize) -> Result<(f64, f64)> {
    if !(0.0..=0.25).contains(&q) {
        return Err(Error::Config(format!("q {q} not in [0, 1/4]")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Config(format!("gamma {gamma} not in (0, 1]")));
    }
    if card == 0 {
        return Err(Error::Config("|X| must be positive".into()));
    }
    let eta = if q == 0.0 {
        0.5
    } else {
        (0.25 + 1.0 / (2.0 * q)).sqrt() - 1.5
    }
    .clamp(0.0, 0.5);
    let rate = (0.2f64).min(1.0 / 3.0 - 4.0 * q / 3.0);
    let bound = rate * gamma * rounds as f64 / 2.0 - (2.0 * card as f64).ln();
    Ok((eta, bound))
}

/// `min(T log(2 / (2 - eta)) - log |X|, 0)`: the guarantee for the optimum
/// when every classifier is exact and cuts at least half the mass.
pub fn exact_classifier_bound(eta: f64, rounds: usize, card: usize) -> f64 {
    (rounds as f64 * (2.0 / (2.0 - eta)).ln() - (card as f64).ln()).min(0.0)
}
