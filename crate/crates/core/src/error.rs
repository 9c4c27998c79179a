use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Subsystem labels or dimensions do not fit together.
    #[error("layout error: {0}")]
    Layout(String),

    /// An object violates one of its validity invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Conditioning on an outcome whose probability is at or below the threshold.
    #[error("zero-probability conditioning: probability {probability:e} is not above {threshold:e}")]
    ZeroProbability { probability: f64, threshold: f64 },

    /// The requested construction is not defined for the given input.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn layout(msg: impl Into<String>) -> Self {
        Error::Layout(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
