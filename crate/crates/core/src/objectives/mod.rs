//! Objective functions: synthetic problems, benchmark functions, table
//! lookups and an external-process adapter.

mod benchmarks;
mod pbm;
mod subprocess;
mod synthetic;

pub use benchmarks::{hartmann6, shekel4, HARTMANN6_ALPHA, HARTMANN6_A, HARTMANN6_P, SHEKEL_A, SHEKEL_C};
pub use pbm::{decode_sequence, encode_sequence, gen_synthetic_pbm, load_pbm, parse_pbm, PbmProblem};
pub use subprocess::SubprocessObjective;
pub use synthetic::{gen_discrete_random_linear, gen_linear_quadratic, gen_random_linear, SyntheticObjective};

use crate::error::{Error, Result};

/// A black-box function to minimize.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> Result<f64>;

    fn evaluate_batch(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        points.iter().map(|x| self.evaluate(x)).collect()
    }
}

/// Evaluates a batch and rejects non-finite values.
pub fn eval_batch(objective: &dyn Objective, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let values = objective.evaluate_batch(points)?;
    if values.len() != points.len() {
        return Err(Error::Subprocess(format!(
            "objective returned {} values for {} points",
            values.len(),
            points.len()
        )));
    }
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite {
            value: *v,
            context: format!("{:?}", points[i]),
        });
    }
    Ok(values)
}

pub(crate) fn check_box(x: &[f64], lo: f64, hi: f64, dim: usize, name: &str) -> Result<()> {
    if x.len() != dim {
        return Err(Error::Domain(format!(
            "{name} expects dimension {dim}, got {}",
            x.len()
        )));
    }
    if let Some(v) = x.iter().find(|v| !(**v >= lo && **v <= hi)) {
        return Err(Error::Domain(format!("{name}: coordinate {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}
