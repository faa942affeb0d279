//! Builds the objective and action space an experiment runs on.

use std::sync::Arc;
use std::time::Duration;

use rand::SeedableRng;
use cutclass::seed::Rng as ChaCha8Rng;

use cutclass::objectives::{
    eval_batch, gen_discrete_random_linear, gen_linear_quadratic, gen_random_linear, gen_synthetic_pbm,
    load_pbm, PbmProblem, SubprocessObjective, SyntheticObjective,
};
use cutclass::{ActionSpace, BoxSpace, Objective};

use crate::config::ProblemConfig;
use crate::CliError;

pub struct Problem {
    pub objective: Arc<dyn Objective>,
    pub space: ActionSpace,
    /// Minimizer index and value, found by exhaustive scan on finite spaces.
    pub optimum: Option<(usize, f64)>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("space", &self.space.summary())
            .field("optimum", &self.optimum)
            .finish()
    }
}

fn cube(obj: SyntheticObjective) -> Result<Problem, CliError> {
    let (lo, hi) = obj.bounds();
    let space = ActionSpace::Box(BoxSpace::cube(obj.dim(), lo, hi)?);
    Ok(Problem {
        objective: Arc::new(obj),
        space,
        optimum: None,
    })
}

fn table(pbm: PbmProblem) -> Result<Problem, CliError> {
    let space = pbm.to_space()?;
    let mut p = Problem {
        objective: Arc::new(pbm),
        space: ActionSpace::Discrete(space),
        optimum: None,
    };
    p.scan_optimum()?;
    Ok(p)
}

impl Problem {
    /// Instantiates the problem; randomized problems draw from `problem_seed`.
    pub fn build(cfg: &ProblemConfig, problem_seed: u64) -> Result<Problem, CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(problem_seed);
        match cfg {
            ProblemConfig::RandomLinear { dim } => cube(gen_random_linear(*dim, &mut rng)?),
            ProblemConfig::LinearQuadratic { dim, mix } => cube(gen_linear_quadratic(*dim, *mix, &mut rng)?),
            ProblemConfig::Shekel { m } => cube(SyntheticObjective::shekel(*m)?),
            ProblemConfig::Hartmann6 => cube(SyntheticObjective::hartmann6()),
            ProblemConfig::DiscreteRandomLinear { size, dim } => {
                let (space, f) = gen_discrete_random_linear(*size, *dim, &mut rng)?;
                let mut p = Problem {
                    objective: Arc::new(f),
                    space: ActionSpace::Discrete(space),
                    optimum: None,
                };
                p.scan_optimum()?;
                Ok(p)
            }
            ProblemConfig::SyntheticPbm { noise_frac } => table(gen_synthetic_pbm(*noise_frac, &mut rng)?),
            ProblemConfig::PbmFile { path } => table(load_pbm(path)?),
            ProblemConfig::Subprocess {
                command,
                lo,
                hi,
                error_value,
                timeout_secs,
            } => {
                if !(*timeout_secs > 0.0 && timeout_secs.is_finite()) {
                    return Err(CliError::Config(format!("timeout_secs {timeout_secs} must be positive")));
                }
                let space = BoxSpace::new(lo.clone(), hi.clone())?;
                let obj = SubprocessObjective::new(
                    command.clone(),
                    space.dim(),
                    *error_value,
                    Duration::from_secs_f64(*timeout_secs),
                )?;
                Ok(Problem {
                    objective: Arc::new(obj),
                    space: ActionSpace::Box(space),
                    optimum: None,
                })
            }
        }
    }

    fn scan_optimum(&mut self) -> Result<(), CliError> {
        if let ActionSpace::Discrete(ds) = &self.space {
            let points: Vec<Vec<f64>> = ds.points().map(<[f64]>::to_vec).collect();
            let values = eval_batch(self.objective.as_ref(), &points)?;
            self.optimum = values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, &v)| (i, v));
        }
        Ok(())
    }
}
