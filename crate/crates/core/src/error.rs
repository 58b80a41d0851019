use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("alpha is undefined for p = {p}, q = {q}; both must lie in (0, 0.5)")]
    UndefinedAlpha { p: f64, q: f64 },

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailure { attempts: usize, reason: String },

    #[error("graph with {n} vertices is too large for exhaustive search (limit {limit}); {hint}")]
    TooLarge {
        n: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("graph is disconnected")]
    Disconnected,

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})"
    )]
    NumericalFailure { sweeps: usize, residual: f64 },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid config: {0}")]
    Config(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
