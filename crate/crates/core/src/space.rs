//! Action spaces: a finite set of featurized points or an axis-aligned box.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, featurized action set. Features are stored row-major.
#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    ids: Vec<String>,
    dim: usize,
    features: Vec<f64>,
}

impl DiscreteSpace {
    pub fn new(points: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Space(format!(
                "a discrete space needs at least 2 points, got {}",
                points.len()
            )));
        }
        let dim = points[0].1.len();
        if dim == 0 {
            return Err(Error::Space("feature dimension must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        let mut ids = Vec::with_capacity(points.len());
        let mut features = Vec::with_capacity(points.len() * dim);
        for (id, x) in points {
            if x.len() != dim {
                return Err(Error::Space(format!(
                    "point {id:?} has dimension {}, expected {dim}",
                    x.len()
                )));
            }
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateAction(id));
            }
            ids.push(id);
            features.extend_from_slice(&x);
        }
        Ok(DiscreteSpace { ids, dim, features })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.dim)
    }
}

/// The box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSpace {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxSpace {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Space(format!(
                "box bounds must be nonempty and of equal length (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(j) = (0..lo.len()).find(|&j| !(lo[j] < hi[j])) {
            return Err(Error::Space(format!(
                "empty side {j}: lo = {}, hi = {}",
                lo[j], hi[j]
            )));
        }
        Ok(BoxSpace { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn side(&self, j: usize) -> f64 {
        self.hi[j] - self.lo[j]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&v, (&l, &h))| v >= l && v <= h)
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| l + (h - l) * rng.random::<f64>())
            .collect()
    }
}

/// The domain an optimizer samples from.
#[derive(Debug, Clone)]
pub enum ActionSpace {
    Discrete(DiscreteSpace),
    Box(BoxSpace),
}

impl ActionSpace {
    pub fn dim(&self) -> usize {
        match self {
            ActionSpace::Discrete(s) => s.dim(),
            ActionSpace::Box(b) => b.dim(),
        }
    }

    pub fn summary(&self) -> SpaceSummary {
        match self {
            ActionSpace::Discrete(s) => SpaceSummary {
                kind: "discrete".into(),
                dim: s.dim(),
                size: Some(s.len()),
                optimum_index: None,
                optimum_value: None,
            },
            ActionSpace::Box(b) => SpaceSummary {
                kind: "box".into(),
                dim: b.dim(),
                size: None,
                optimum_index: None,
                optimum_value: None,
            },
        }
    }
}

/// Compact description of a space stored in trace headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub kind: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Index of the minimizer, when the harness knows it (finite spaces).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum_value: Option<f64>,
}
