//! Exact consistent selective strategy for linear classifiers with a bias.
//!
//! A labeling is consistent when some `theta` satisfies `(2z_i - 1) theta . x_i > 0`
//! for every row. With unit-normalized signed rows `a_i` this is the LP
//! `max m  s.t.  a_i . theta >= m,  |theta|_1 <= 1,  m <= 1`, feasible iff `m* > 0`
//! (numerically, `m* > CSS_MARGIN_EPS`).

use serde::{Deserialize, Serialize};

use super::{Decision, Learner, SoftLabeler};
use crate::error::{Error, Result};
use crate::linalg::{augment, norm};
use crate::lp::{maximize, LpOutcome};
use crate::observe::LabeledSet;
use crate::seed::Rng;

pub const CSS_MARGIN_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VersionSpaceDecision {
    Pos,
    Neg,
    Disagree,
}

impl From<VersionSpaceDecision> for Decision {
    fn from(v: VersionSpaceDecision) -> Decision {
        match v {
            VersionSpaceDecision::Pos => Decision::Cut,
            VersionSpaceDecision::Neg => Decision::Keep,
            VersionSpaceDecision::Disagree => Decision::Abstain,
        }
    }
}

fn signed_row(x: &[f64], z: bool) -> Vec<f64> {
    let xa = augment(x);
    let s = if z { 1.0 } else { -1.0 } / norm(&xa);
    xa.into_iter().map(|v| v * s).collect()
}

/// Largest normalized margin achievable on `rows`; 0 when infeasible.
fn max_margin(rows: &[Vec<f64>], extra: Option<&[f64]>) -> f64 {
    let dim = rows.first().map(Vec::len).or(extra.map(<[f64]>::len)).unwrap_or(0);
    // variables: theta_plus (dim), theta_minus (dim), m
    let nv = 2 * dim + 1;
    let mut a = Vec::with_capacity(rows.len() + dim + 2);
    for r in rows.iter().map(Vec::as_slice).chain(extra) {
        let mut row = vec![0.0; nv];
        for j in 0..dim {
            row[j] = -r[j];
            row[dim + j] = r[j];
        }
        row[2 * dim] = 1.0;
        a.push(row);
    }
    for j in 0..dim {
        let mut row = vec![0.0; nv];
        row[j] = 1.0;
        row[dim + j] = 1.0;
        a.push(row);
    }
    let mut cap = vec![0.0; nv];
    cap[2 * dim] = 1.0;
    a.push(cap);
    let mut b = vec![0.0; a.len()];
    for v in b.iter_mut().skip(a.len() - dim - 1) {
        *v = 1.0;
    }
    let mut c = vec![0.0; nv];
    c[2 * dim] = 1.0;
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => value,
        // the feasible region is bounded, so neither of these should happen
        LpOutcome::Unbounded => 1.0,
        LpOutcome::IterationLimit => 0.0,
    }
}

/// The version space of a realizable linear sample.
#[derive(Debug, Clone)]
pub struct CssLinear {
    rows: Vec<Vec<f64>>,
}

impl CssLinear {
    /// Rows are raw features; the bias is appended internally.
    pub fn fit(data: &LabeledSet) -> Result<CssLinear> {
        if data.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let rows: Vec<Vec<f64>> = data
            .rows
            .iter()
            .zip(&data.labels)
            .map(|(x, &z)| signed_row(x, z))
            .collect();
        if max_margin(&rows, None) <= CSS_MARGIN_EPS {
            return Err(Error::NonRealizable);
        }
        Ok(CssLinear { rows })
    }

    pub fn consistent_with(&self, x: &[f64], z: bool) -> bool {
        max_margin(&self.rows, Some(&signed_row(x, z))) > CSS_MARGIN_EPS
    }

    pub fn decide_vs(&self, x: &[f64]) -> VersionSpaceDecision {
        let pos_ok = self.consistent_with(x, true);
        let neg_ok = self.consistent_with(x, false);
        match (pos_ok, neg_ok) {
            (true, false) => VersionSpaceDecision::Pos,
            (false, true) => VersionSpaceDecision::Neg,
            _ => VersionSpaceDecision::Disagree,
        }
    }
}

impl SoftLabeler for CssLinear {
    fn decide(&self, x: &[f64]) -> Decision {
        self.decide_vs(x).into()
    }
}

pub fn css_linear_decide(data: &LabeledSet, x: &[f64]) -> Result<VersionSpaceDecision> {
    Ok(CssLinear::fit(data)?.decide_vs(x))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CssLinearLearner;

impl Learner for CssLinearLearner {
    fn fit(&self, data: &LabeledSet, _rng: &mut Rng) -> Result<Box<dyn SoftLabeler>> {
        Ok(Box::new(CssLinear::fit(data)?))
    }
}
