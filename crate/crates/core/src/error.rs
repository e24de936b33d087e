use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sigma must lie strictly inside (0, 0.1), got {0}")]
    InvalidSigma(f64),

    /// A 2x2 solve hit a (near-)singular matrix; the hyperparameters are
    /// outside the regime the update rule supports.
    #[error("singular matrix in linear solve (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("polynomial division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("no exact certificate is available for game {0}")]
    UnsupportedGame(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
