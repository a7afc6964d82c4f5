//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation (bad ordering of
    /// times, exponent out of range, mismatched grids, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration violates one of the standing hypotheses or is
    /// internally inconsistent. The message names the violated condition.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure failed (factorization breakdown, blow-up, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Picard iteration ran out of iterations. Carries the full history of
    /// successive-iterate distances for diagnosis.
    #[error("fixed-point iteration did not converge after {iterations} iterations (last distance {last_distance:.3e})")]
    NonConvergence {
        iterations: usize,
        last_distance: f64,
        history: Vec<f64>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for the CLI: 1 for configuration problems,
    /// 3 for numerical failures. (Exit code 2 is reserved for verification
    /// checks that ran but did not pass.)
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::Numerical(_) | Error::NonConvergence { .. } => 3,
        }
    }
}
