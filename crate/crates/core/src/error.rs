//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure cases surfaced by graph construction, numeric kernels, the
/// estimation loops and the network simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid configuration or arguments (bad graph description, bad
    /// interval, bad step-size inputs, ...).
    Config(String),
    /// Random-graph generation gave up (e.g. connectivity resample limit).
    Generation(String),
    /// A matrix that must be positive definite is not; carries the
    /// offending minimum eigenvalue.
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// Linear solve rejected: condition estimate above the accepted limit.
    IllConditioned { cond_estimate: f64 },
    /// Exactly singular system.
    Singular,
    /// Non-finite (NaN/Inf) input where finite data is required.
    NonFinite,
    /// Numeric failure that does not fit the variants above.
    Numeric(String),
    /// Value-level misuse, e.g. vector length mismatch.
    DimensionMismatch { expected: usize, got: usize },
    /// Message-passing contract violated in the network simulation.
    Protocol(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Generation(msg) => write!(f, "generation error: {msg}"),
            Error::NotPositiveDefinite { min_eigenvalue } => {
                write!(f, "matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::IllConditioned { cond_estimate } => {
                write!(f, "system is ill-conditioned (condition estimate {cond_estimate:e})")
            }
            Error::Singular => write!(f, "singular system"),
            Error::NonFinite => write!(f, "non-finite entries"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Protocol(msg) => write!(f, "protocol violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
