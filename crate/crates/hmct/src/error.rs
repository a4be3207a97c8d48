//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by construction, demodulation, estimation, and the
/// simulation harness.
#[derive(Debug, Error)]
pub enum HmctError {
    /// A parameter violates an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An estimator was handed too few statistics to fit its model.
    #[error("insufficient statistic: {0}")]
    InsufficientStatistic(String),

    /// A configuration file or value could not be parsed.
    #[error("config error: {0}")]
    Config(String),

    /// Reading or writing an output artifact failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, HmctError>;
