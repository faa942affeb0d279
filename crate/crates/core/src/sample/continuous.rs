//! Particle approximation of the multiplicative-weights target on a box.
//!
//! Candidates come from an equal-weight mixture of axis-aligned Gaussians
//! centered at the latest batch and truncated to the box. Each candidate gets
//! the weight `W(x) = prod_s (1 - eta * h_s(x))` over all classifiers so far
//! (optionally divided by the mixture density), and the batch is chosen by
//! residual resampling.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::discrete::check_eta;
use crate::classify::SoftLabeler;
use crate::error::{Error, Result};
use crate::linalg::{log_sum_exp, phi};
use crate::seed::Rng;
use crate::space::BoxSpace;

/// How candidate weights account for the proposal density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImportanceWeighting {
    /// `W(x) / q(x)`: the resampled batch targets `W` times the uniform base
    /// measure on the box.
    Exact,
    /// `W(x)` alone: the batch targets `q(x) W(x)`, so the perturbation kernel
    /// acts as a local search around the latest batch.
    #[default]
    ClassifierOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuousSamplerConfig {
    /// Candidates drawn per output point.
    pub oversample: usize,
    /// Initial kernel width as a fraction of each box side.
    pub bandwidth_frac: f64,
    /// The width halves after a round whose coverage exceeds this.
    pub shrink_above: f64,
    pub weighting: ImportanceWeighting,
    /// ESS below this fraction of the candidate count is noted in the trace.
    pub min_ess_frac: f64,
}

impl Default for ContinuousSamplerConfig {
    fn default() -> Self {
        ContinuousSamplerConfig {
            oversample: 10,
            bandwidth_frac: 0.3,
            shrink_above: 0.9,
            weighting: ImportanceWeighting::default(),
            min_ess_frac: 0.01,
        }
    }
}

impl ContinuousSamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oversample == 0 {
            return Err(Error::Config("oversample must be at least 1".into()));
        }
        if !(self.bandwidth_frac > 0.0 && self.bandwidth_frac.is_finite()) {
            return Err(Error::Config(format!("bandwidth_frac {} must be positive", self.bandwidth_frac)));
        }
        if !(0.0..=1.0).contains(&self.shrink_above) || !(0.0..=1.0).contains(&self.min_ess_frac) {
            return Err(Error::Config("shrink_above and min_ess_frac must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// One resampled batch and its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDraw {
    pub points: Vec<Vec<f64>>,
    /// Estimated mass the newest classifier cuts under the previous target.
    pub coverage: Option<f64>,
    pub ess: f64,
    pub bandwidth: Vec<f64>,
    pub notes: Vec<String>,
}

pub struct ParticleState {
    space: BoxSpace,
    eta: f64,
    cfg: ContinuousSamplerConfig,
    classifiers: Vec<Box<dyn SoftLabeler>>,
    latest: Vec<Vec<f64>>,
    bandwidth: Vec<f64>,
}

impl ParticleState {
    pub fn new(space: BoxSpace, eta: f64, cfg: ContinuousSamplerConfig) -> Result<Self> {
        check_eta(eta)?;
        cfg.validate()?;
        let bandwidth = (0..space.dim()).map(|j| cfg.bandwidth_frac * space.side(j)).collect();
        Ok(ParticleState {
            space,
            eta,
            cfg,
            classifiers: Vec::new(),
            latest: Vec::new(),
            bandwidth,
        })
    }

    pub fn space(&self) -> &BoxSpace {
        &self.space
    }

    pub fn bandwidth(&self) -> &[f64] {
        &self.bandwidth
    }

    pub fn set_bandwidth(&mut self, bandwidth: Vec<f64>) -> Result<()> {
        if bandwidth.len() != self.space.dim() || bandwidth.iter().any(|h| !(*h > 0.0)) {
            return Err(Error::Config("bandwidth must be positive in every dimension".into()));
        }
        self.bandwidth = bandwidth;
        Ok(())
    }

    pub fn n_classifiers(&self) -> usize {
        self.classifiers.len()
    }

    pub fn push_classifier(&mut self, h: Box<dyn SoftLabeler>) {
        self.classifiers.push(h);
    }

    /// The batch the next proposal is centered on.
    pub fn set_latest_batch(&mut self, points: Vec<Vec<f64>>) {
        self.latest = points;
    }

    /// `log W(x)` over every classifier pushed so far.
    pub fn log_weight(&self, x: &[f64]) -> f64 {
        let step = (1.0 - self.eta).ln();
        self.classifiers.iter().filter(|h| h.effective_h(x)).count() as f64 * step
    }

    fn sample_kernel(&self, center: &[f64], bw: &[f64], rng: &mut Rng) -> Vec<f64> {
        let (lo, hi) = (self.space.lo(), self.space.hi());
        center
            .iter()
            .enumerate()
            .map(|(j, &c)| loop {
                let z: f64 = rng.sample(StandardNormal);
                let v = c + bw[j] * z;
                if v >= lo[j] && v <= hi[j] {
                    break v;
                }
            })
            .collect()
    }

    fn log_proposal(&self, x: &[f64], log_norms: &[f64], bw: &[f64]) -> f64 {
        let terms: Vec<f64> = self
            .latest
            .iter()
            .zip(log_norms)
            .map(|(c, ln)| {
                let q: f64 = x
                    .iter()
                    .zip(c)
                    .zip(bw)
                    .map(|((xv, cv), h)| {
                        let z = (xv - cv) / h;
                        -0.5 * z * z
                    })
                    .sum();
                q - ln
            })
            .collect();
        log_sum_exp(&terms) - (self.latest.len() as f64).ln()
    }

    fn attempt(&self, n: usize, bw: &[f64], rng: &mut Rng) -> Result<Option<ContinuousDraw>> {
        let m = self.cfg.oversample * n;
        let d = self.space.dim();
        let (lo, hi) = (self.space.lo(), self.space.hi());
        let candidates: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let k = rng.random_range(0..self.latest.len());
                self.sample_kernel(&self.latest[k], bw, rng)
            })
            .collect();

        let half_log_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
        let log_norms: Vec<f64> = self
            .latest
            .iter()
            .map(|c| {
                (0..d)
                    .map(|j| {
                        let mass = phi((hi[j] - c[j]) / bw[j]) - phi((lo[j] - c[j]) / bw[j]);
                        bw[j].ln() + half_log_2pi + mass.max(f64::MIN_POSITIVE).ln()
                    })
                    .sum()
            })
            .collect();

        let step = (1.0 - self.eta).ln();
        let t = self.classifiers.len();
        // (log W before the newest classifier, newest cut, log q)
        let scored: Vec<(f64, bool, f64)> = candidates
            .par_iter()
            .map(|x| {
                let cuts: Vec<bool> = self.classifiers.iter().map(|h| h.effective_h(x)).collect();
                let prev = cuts[..t.saturating_sub(1)].iter().filter(|&&c| c).count() as f64 * step;
                let newest = t > 0 && cuts[t - 1];
                let lq = match self.cfg.weighting {
                    ImportanceWeighting::Exact => self.log_proposal(x, &log_norms, bw),
                    ImportanceWeighting::ClassifierOnly => 0.0,
                };
                (prev, newest, lq)
            })
            .collect();

        let log_iw: Vec<f64> = scored
            .iter()
            .map(|&(prev, newest, lq)| prev + if newest { step } else { 0.0 } - lq)
            .collect();
        let top = log_iw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Ok(None);
        }
        let w: Vec<f64> = log_iw.iter().map(|l| (l - top).exp()).collect();
        let sum: f64 = w.iter().sum();
        let ess = sum * sum / w.iter().map(|v| v * v).sum::<f64>();

        let coverage = (t > 0).then(|| {
            let prev: Vec<f64> = scored.iter().map(|&(p, _, lq)| p - lq).collect();
            let ptop = prev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (mut cut, mut tot) = (0.0, 0.0);
            for (l, &(_, newest, _)) in prev.iter().zip(&scored) {
                let v = (l - ptop).exp();
                tot += v;
                if newest {
                    cut += v;
                }
            }
            (cut / tot).clamp(0.0, 1.0)
        });

        let mut notes = Vec::new();
        if ess < self.cfg.min_ess_frac * m as f64 {
            notes.push(format!("low effective sample size {ess:.1} of {m} candidates"));
        }
        let picks = residual_resample(&w, n, rng);
        let points = picks.into_iter().map(|i| candidates[i].clone()).collect();
        Ok(Some(ContinuousDraw {
            points,
            coverage,
            ess,
            bandwidth: bw.to_vec(),
            notes,
        }))
    }

    /// Draws `n` points; see [`draw_continuous`].
    pub fn draw(&mut self, n: usize, rng: &mut Rng) -> Result<ContinuousDraw> {
        if n == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if self.latest.is_empty() {
            let points = (0..n).map(|_| self.space.sample_uniform(rng)).collect();
            return Ok(ContinuousDraw {
                points,
                coverage: None,
                ess: n as f64,
                bandwidth: self.bandwidth.clone(),
                notes: Vec::new(),
            });
        }
        let mut bw = self.bandwidth.clone();
        let mut out = self.attempt(n, &bw, rng)?;
        if out.is_none() {
            bw.iter_mut().for_each(|h| *h *= 2.0);
            out = self.attempt(n, &bw, rng)?;
        }
        let mut draw = out.ok_or(Error::DegenerateDistribution)?;
        if bw != self.bandwidth {
            draw.notes.push("all candidate weights vanished; bandwidth doubled".into());
        }
        if draw.coverage.is_some_and(|c| c > self.cfg.shrink_above) {
            self.bandwidth.iter_mut().for_each(|h| *h *= 0.5);
        }
        Ok(draw)
    }
}

/// Draws from the current particle approximation, shrinking the kernel for the
/// next round when the newest classifier cut almost everything.
pub fn draw_continuous(state: &mut ParticleState, n: usize, rng: &mut Rng) -> Result<ContinuousDraw> {
    state.draw(n, rng)
}

/// Deterministic copies `floor(n w_i)` followed by multinomial draws on the
/// remainders. `w` need not be normalized.
fn residual_resample(w: &[f64], n: usize, rng: &mut Rng) -> Vec<usize> {
    let total: f64 = w.iter().sum();
    let mut picks = Vec::with_capacity(n);
    let mut resid = Vec::with_capacity(w.len());
    for (i, &wi) in w.iter().enumerate() {
        let share = n as f64 * wi / total;
        let k = share.floor() as usize;
        picks.extend(std::iter::repeat_n(i, k.min(n - picks.len())));
        resid.push(share - k as f64);
    }
    let rest = n - picks.len();
    if rest > 0 {
        let mut cdf = Vec::with_capacity(resid.len());
        let mut acc = 0.0;
        for r in &resid {
            acc += r.max(0.0);
            cdf.push(acc);
        }
        let last = cdf.len() - 1;
        for _ in 0..rest {
            let u = rng.random::<f64>() * acc;
            picks.push(cdf.partition_point(|&c| c <= u).min(last));
        }
    }
    picks
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn residual_counts_are_exact_for_integral_shares() {
        let mut rng = Rng::seed_from_u64(0);
        let picks = residual_resample(&[1.0, 3.0], 4, &mut rng);
        assert_eq!(picks, vec![0, 1, 1, 1]);
        assert_eq!(residual_resample(&[0.2, 0.3, 0.5], 7, &mut rng).len(), 7);
    }

    #[test]
    fn first_draw_is_uniform_in_box() {
        let mut rng = Rng::seed_from_u64(0);
        let mut s = ParticleState::new(BoxSpace::cube(3, -1.0, 1.0).unwrap(), 0.5, Default::default()).unwrap();
        let d = s.draw(20, &mut rng).unwrap();
        assert_eq!(d.points.len(), 20);
        assert!(d.coverage.is_none());
    }

    #[test]
    fn tiny_bandwidth_collapses_on_center() {
        let mut rng = Rng::seed_from_u64(0);
        let space = BoxSpace::cube(2, 0.0, 1.0).unwrap();
        let mut s = ParticleState::new(space, 0.5, Default::default()).unwrap();
        s.set_bandwidth(vec![1e-9; 2]).unwrap();
        s.set_latest_batch(vec![vec![0.3, 0.7]]);
        let d = s.draw(50, &mut rng).unwrap();
        for p in d.points {
            assert!((p[0] - 0.3).abs() < 1e-6 && (p[1] - 0.7).abs() < 1e-6);
        }
    }
}
