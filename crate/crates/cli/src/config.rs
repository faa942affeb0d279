//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cutclass::classify::{BootstrapLinearConfig, ClassifierSpec, TreeEnsembleConfig};
use cutclass::observe::ThresholdPolicy;
use cutclass::optimize::PairwiseConfig;
use cutclass::sample::ContinuousSamplerConfig;
use cutclass::OptimizerConfig;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub output_dir: PathBuf,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Seed of the problem instance; shared by all replicates and methods.
    #[serde(default)]
    pub problem_seed: u64,
    pub rounds: usize,
    pub batch_size: usize,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default)]
    pub sampler: ContinuousSamplerConfig,
    pub problem: ProblemConfig,
    pub methods: Vec<MethodConfig>,
}

fn default_replicates() -> usize {
    15
}

fn default_eta() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemConfig {
    RandomLinear {
        dim: usize,
    },
    LinearQuadratic {
        dim: usize,
        #[serde(default = "default_mix")]
        mix: f64,
    },
    Shekel {
        #[serde(default = "default_shekel_m")]
        m: usize,
    },
    Hartmann6,
    DiscreteRandomLinear {
        size: usize,
        dim: usize,
    },
    SyntheticPbm {
        #[serde(default = "default_noise")]
        noise_frac: f64,
    },
    PbmFile {
        path: PathBuf,
    },
    Subprocess {
        command: Vec<String>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        #[serde(default)]
        error_value: f64,
        #[serde(default = "default_timeout")]
        timeout_secs: f64,
    },
}

fn default_mix() -> f64 {
    1.0
}

fn default_shekel_m() -> usize {
    10
}

fn default_noise() -> f64 {
    0.01
}

fn default_timeout() -> f64 {
    60.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    ClassifyRf,
    ClassifyTuned,
    Css,
    Oracle,
    Random,
    #[serde(rename = "random-2x")]
    Random2x,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::ClassifyRf => "classify-rf",
            MethodKind::ClassifyTuned => "classify-tuned",
            MethodKind::Css => "css",
            MethodKind::Oracle => "oracle",
            MethodKind::Random => "random",
            MethodKind::Random2x => "random-2x",
        }
    }

    pub fn is_baseline(self) -> bool {
        matches!(self, MethodKind::Random | MethodKind::Random2x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodConfig {
    pub kind: MethodKind,
    /// Directory and column name; derived from the kind when absent.
    #[serde(default)]
    pub name: Option<String>,
    /// Comparisons per point for comparison-only feedback.
    #[serde(default)]
    pub pairwise_c: Option<usize>,
    #[serde(default)]
    pub pairwise_exhaustive: bool,
    #[serde(default)]
    pub trees: Option<TreeEnsembleConfig>,
    #[serde(default)]
    pub bootstrap: Option<BootstrapLinearConfig>,
    #[serde(default)]
    pub threshold: Option<ThresholdPolicy>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub sampler: Option<ContinuousSamplerConfig>,
}

impl MethodConfig {
    pub fn new(kind: MethodKind) -> Self {
        MethodConfig {
            kind,
            name: None,
            pairwise_c: None,
            pairwise_exhaustive: false,
            trees: None,
            bootstrap: None,
            threshold: None,
            eta: None,
            sampler: None,
        }
    }

    pub fn name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match (self.pairwise_c, self.pairwise_exhaustive) {
            (_, true) => format!("{}-pairwise-all", self.kind.as_str()),
            (Some(c), false) => format!("{}-pairwise-c{c}", self.kind.as_str()),
            (None, false) => self.kind.as_str().to_string(),
        }
    }

    fn classifier(&self) -> Option<ClassifierSpec> {
        match self.kind {
            MethodKind::ClassifyRf => Some(ClassifierSpec::TreeEnsemble(self.trees.clone().unwrap_or_default())),
            MethodKind::ClassifyTuned => {
                Some(ClassifierSpec::BootstrapLinear(self.bootstrap.clone().unwrap_or_default()))
            }
            MethodKind::Css => Some(ClassifierSpec::CssLinear),
            MethodKind::Oracle => Some(ClassifierSpec::Oracle),
            MethodKind::Random | MethodKind::Random2x => None,
        }
    }

    /// Optimizer settings for classifier methods; `None` for baselines.
    pub fn optimizer(&self, exp: &ExperimentConfig) -> Option<OptimizerConfig> {
        let mut cfg = OptimizerConfig::new(exp.rounds, exp.batch_size, self.classifier()?);
        cfg.eta = self.eta.unwrap_or(exp.eta);
        cfg.threshold = self.threshold.unwrap_or_default();
        cfg.sampler = self.sampler.clone().unwrap_or_else(|| exp.sampler.clone());
        if self.pairwise_c.is_some() || self.pairwise_exhaustive {
            cfg.pairwise = Some(PairwiseConfig {
                c: self.pairwise_c.unwrap_or(PairwiseConfig::default().c),
                exhaustive: self.pairwise_exhaustive,
            });
        }
        Some(cfg)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        let mut names: Vec<String> = self.methods.iter().map(MethodConfig::name).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate method name {:?}", w[0]));
        }
        for m in &self.methods {
            let name = m.name();
            if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
                return bad(format!("method name {name:?} is not a valid directory name"));
            }
            if m.kind.is_baseline() {
                if self.rounds == 0 || self.batch_size == 0 {
                    return bad("rounds and batch_size must be positive".into());
                }
                if m.pairwise_c.is_some() || m.pairwise_exhaustive {
                    return bad(format!("{name}: random baselines take no comparison feedback"));
                }
                continue;
            }
            if let Some(cfg) = m.optimizer(self) {
                cfg.validate().map_err(|e| CliError::Config(format!("{name}: {e}")))?;
            }
        }
        Ok(())
    }
}
