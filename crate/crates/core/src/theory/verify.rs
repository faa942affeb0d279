//! Recomputes `log p^(t)(x*)` from the cut masks of a finite-space trace and
//! compares it with the round-by-round lower bound.

use serde::{Deserialize, Serialize};

use super::bounds::thm1_formula;
use crate::error::{Error, Result};
use crate::linalg::log_sum_exp;
use crate::trace::{decode_mask, RunTrace};

pub const SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: usize,
    /// Exact `log p^(t)(x*)`.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Coverage recomputed from the masks.
    pub coverage: f64,
    /// Smallest coverage over rounds `1..=t`, used in `rhs`.
    pub gamma: f64,
    /// Rounds `1..=t` whose classifier cut `x*`.
    pub cuts_of_x_star: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x_star: usize,
    pub size: usize,
    pub eta: f64,
    /// Smallest coverage over the whole run.
    pub gamma: f64,
    pub rounds: Vec<BoundRow>,
    pub verdict: bool,
    /// Some round cut no mass, so the bound carries no information from then on.
    pub vacuous: bool,
    pub notes: Vec<String>,
}

struct Replay {
    size: usize,
    eta: f64,
    /// Per classifier round: (t, mask, logged coverage).
    rounds: Vec<(usize, Vec<bool>, Option<f64>)>,
}

fn replay(trace: &RunTrace) -> Result<Replay> {
    let size = trace
        .header
        .space
        .size
        .ok_or_else(|| Error::Config("bound checks need a finite action space".into()))?;
    let eta = trace
        .header
        .config
        .get("eta")
        .and_then(serde_json::Value::as_f64)
        .ok_or_else(|| Error::Config("trace header does not record eta".into()))?;
    let mut rounds = Vec::new();
    for r in trace.rounds.iter().filter(|r| r.t > 0) {
        let hex = r
            .cut_mask
            .as_deref()
            .ok_or_else(|| Error::Config(format!("round {} has no cut mask", r.t)))?;
        rounds.push((r.t, decode_mask(hex, size)?, r.coverage));
    }
    Ok(Replay { size, eta, rounds })
}

/// `log p^(t)(x*)` for `t = 0, 1, ..., T`, from uniform initial weights.
pub fn log_prob_trajectory(trace: &RunTrace, x_star: usize) -> Result<Vec<f64>> {
    let rp = replay(trace)?;
    if x_star >= rp.size {
        return Err(Error::Config(format!("x* = {x_star} outside a space of {} points", rp.size)));
    }
    let step = (1.0 - rp.eta).ln();
    let mut counts = vec![0u32; rp.size];
    let mut out = vec![-(rp.size as f64).ln()];
    for (_, mask, _) in &rp.rounds {
        for (c, &m) in counts.iter_mut().zip(mask) {
            *c += m as u32;
        }
        out.push(log_prob(&counts, step, x_star));
    }
    Ok(out)
}

fn log_prob(counts: &[u32], step: f64, i: usize) -> f64 {
    // with eta = 0 the step is 0 and every weight stays 1
    let logs: Vec<f64> = counts.iter().map(|&c| c as f64 * step).collect();
    logs[i] - log_sum_exp(&logs)
}

/// Checks the bound after every round. `x_star` defaults to the optimum
/// index recorded in the trace header.
pub fn verify_thm1(trace: &RunTrace, x_star: Option<usize>) -> Result<BoundReport> {
    let rp = replay(trace)?;
    let x_star = x_star
        .or(trace.header.space.optimum_index)
        .ok_or_else(|| Error::Config("no x* given and the trace does not record the optimum".into()))?;
    if x_star >= rp.size {
        return Err(Error::Config(format!("x* = {x_star} outside a space of {} points", rp.size)));
    }
    let step = (1.0 - rp.eta).ln();
    let mut counts = vec![0u32; rp.size];
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    let mut gamma = f64::INFINITY;
    let mut vacuous = false;
    for (k, (t, mask, logged)) in rp.rounds.iter().enumerate() {
        let logs: Vec<f64> = counts.iter().map(|&c| c as f64 * step).collect();
        let z = log_sum_exp(&logs);
        let coverage: f64 = logs
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(l, _)| (l - z).exp())
            .sum::<f64>()
            .clamp(0.0, 1.0);
        if let Some(c) = logged {
            if (c - coverage).abs() > 1e-9 {
                notes.push(format!("round {t}: logged coverage {c} differs from recomputed {coverage}"));
            }
        }
        gamma = gamma.min(coverage);
        if gamma == 0.0 && !vacuous {
            vacuous = true;
            notes.push(format!("round {t}: zero coverage, the bound is vacuous from here on"));
        }
        for (c, &m) in counts.iter_mut().zip(mask) {
            *c += m as u32;
        }
        let lhs = log_prob(&counts, step, x_star);
        let m_star = counts[x_star] as usize;
        let rhs = thm1_formula(gamma, rp.eta, k + 1, m_star, rp.size);
        rows.push(BoundRow {
            t: *t,
            lhs,
            rhs,
            slack: lhs - rhs,
            coverage,
            gamma,
            cuts_of_x_star: m_star,
        });
    }
    let verdict = rows.iter().all(|r| r.slack >= -SLACK_TOLERANCE);
    Ok(BoundReport {
        x_star,
        size: rp.size,
        eta: rp.eta,
        gamma: if gamma.is_finite() { gamma } else { 0.0 },
        rounds: rows,
        verdict,
        vacuous,
        notes,
    })
}
