use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-facing configuration (qubit counts, modes, names).
    #[error("configuration error: {0}")]
    Config(String),

    /// Shape or index mismatch inside circuits, parameter sets or series.
    #[error("structural error: {0}")]
    Structural(String),

    /// A value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("export error: {0}")]
    Export(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// `trace` holds the training MSE of every completed iteration.
    #[error("training diverged at iteration {iteration}: {msg}")]
    Divergence { iteration: usize, msg: String, trace: Vec<f64> },

    /// `trace` pairs each tried rescale value with its final training MSE.
    #[error("rescale fine-tuning failed: no rung reached the threshold (trace: {trace:?})")]
    FineTune { trace: Vec<(f64, f64)> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
