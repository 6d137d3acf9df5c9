//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates its mathematical domain (e.g. p outside [0, 1]).
    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator fell below the singularity guard.
    #[error("singularity: {0}")]
    Singular(String),

    /// The fixed-point iteration did not reach the residual tolerance.
    #[error("fixed-point iteration did not converge at u_f = {u_f:e} \
             ({iterations} iterations, residual {residual:e})")]
    NonConvergence {
        u_f: f64,
        iterations: u32,
        residual: f64,
    },

    /// Configuration rejected by validation; the message names the field.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
