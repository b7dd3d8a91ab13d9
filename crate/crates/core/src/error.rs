use thiserror::Error;

/// Errors surfaced by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KineticError {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite field value {value} at v = {at:?}")]
    Evaluation { at: Vec<f64>, value: f64 },

    #[error("missing capability: {0}")]
    Capability(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("kernel rejected: {0}")]
    KernelRejected(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("run aborted at t = {time}: {reason}")]
    RunAborted { time: f64, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for KineticError {
    fn from(err: std::io::Error) -> Self {
        KineticError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, KineticError>;
