use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty batch")]
    EmptyBatch,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid action space: {0}")]
    Space(String),

    #[error("point outside the objective domain: {0}")]
    Domain(String),

    #[error("objective returned a non-finite value {value} at {context}")]
    NonFinite { value: f64, context: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate action {0:?}")]
    DuplicateAction(String),

    #[error("non-realizable sample: no linear separator is consistent with the labels")]
    NonRealizable,

    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    #[error("degenerate bootstrap resample: all multiplier weight on one class after {retries} retries")]
    DegenerateBootstrap { retries: usize },

    #[error("degenerate distribution: every weight is zero")]
    DegenerateDistribution,

    #[error("round {round}: {source}")]
    Round {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("subprocess objective: {0}")]
    Subprocess(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_round(self, round: usize) -> Error {
        Error::Round {
            round,
            source: Box::new(self),
        }
    }
}
