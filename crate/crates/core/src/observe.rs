//! Observations, thresholds and the labeled history classifiers are fit on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One evaluated point. `index` is set for points of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub x: Vec<f64>,
    pub index: Option<usize>,
    pub y: f64,
}

impl Observation {
    pub fn new(x: Vec<f64>, index: Option<usize>, y: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::NonFinite {
                value: y,
                context: format!("{x:?}"),
            });
        }
        Ok(Observation { x, index, y })
    }
}

/// Feature rows with binary labels; `true` means "above threshold" (cut).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledSet {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
    /// Threshold the labels were generated against, when there was one.
    pub alpha: Option<f64>,
}

impl LabeledSet {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<bool>, alpha: Option<f64>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Config(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(r) = rows.first() {
            if rows.iter().any(|x| x.len() != r.len()) {
                return Err(Error::Config("labeled rows differ in dimension".into()));
            }
        }
        Ok(LabeledSet { rows, labels, alpha })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn count_positive(&self) -> usize {
        self.labels.iter().filter(|&&z| z).count()
    }
}

/// Which observations the round threshold is the median of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdPolicy {
    /// Median of the most recently observed batch.
    #[default]
    LatestBatch,
    /// Median of every observation so far.
    AllHistory,
    /// Largest value whose probability under the current proposal is at most
    /// 1/2 below-or-at it, so the cut set holds at least half the mass. Finite
    /// spaces only; evaluates the objective on the whole space outside the
    /// run's budget, so it is meant for checking bounds rather than optimizing.
    PopulationMedian,
}

/// Threshold `alpha` over a finite space with point values `values` and
/// probabilities `probs`: the largest value `v` with `P(f <= v) <= 1/2`, or
/// the smallest value if no such `v` exists. Then `P(f > alpha) >= 1/2`
/// whenever some value qualifies.
pub fn population_threshold(values: &[f64], probs: &[f64]) -> Result<f64> {
    if values.is_empty() || values.len() != probs.len() {
        return Err(Error::EmptyBatch);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut alpha = values[order[0]];
    let mut cum = 0.0;
    let mut k = 0;
    while k < order.len() {
        // all points sharing a value enter the CDF together
        let v = values[order[k]];
        while k < order.len() && values[order[k]] == v {
            cum += probs[order[k]];
            k += 1;
        }
        if cum <= 0.5 + 1e-12 {
            alpha = v;
        } else {
            break;
        }
    }
    Ok(alpha)
}

/// Lower median: the element at index `(k - 1) / 2` of the sorted values.
pub fn median_threshold(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            value: *v,
            context: "threshold batch".into(),
        });
    }
    let mut sorted = values.to_vec();
    let k = (sorted.len() - 1) / 2;
    let (_, m, _) = sorted.select_nth_unstable_by(k, f64::total_cmp);
    Ok(*m)
}

/// Labels every past observation against the current threshold: `z = y > alpha`.
pub fn relabel_history(history: &[Observation], alpha: f64) -> Result<LabeledSet> {
    if history.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let rows = history.iter().map(|o| o.x.clone()).collect();
    let labels = history.iter().map(|o| o.y > alpha).collect();
    LabeledSet::new(rows, labels, Some(alpha))
}
