use thiserror::Error;

/// Errors produced by the library.
///
/// `Config` errors come from invalid arguments or experiment configuration;
/// everything numeric (non-finite values, degenerate conditioning, failed
/// factorizations) is a distinct class so callers can map them to different
/// exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected_height}x{expected_width}, got {height}x{width}")]
    ShapeMismatch {
        expected_height: usize,
        expected_width: usize,
        height: usize,
        width: usize,
    },

    #[error("step index {t} out of range (schedule has {steps} steps)")]
    StepOutOfRange { t: usize, steps: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("covariance of component {0} is not positive definite")]
    NotPositiveDefinite(usize),

    #[error("degenerate conditioning: beta[t] = 0 but x_t does not equal the blurred x0")]
    DegenerateConditioning,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors that stem from a bad configuration rather than a
    /// numerical failure at run time.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::InvalidArgument(_) | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
