use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read config {path}: {source}")]
    ConfigIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config {path}: {message}")]
    ConfigFormat { path: PathBuf, message: String },

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParam { key: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unsupported orientation `{0}` for the first-order rate (random orientation only)")]
    UnsupportedOrientation(String),

    #[error("quadrature did not converge: estimated error {achieved:.3e} exceeds target {target:.3e} after {intervals} intervals")]
    QuadratureNonConvergence {
        achieved: f64,
        target: f64,
        intervals: usize,
    },

    #[error("empty series")]
    EmptySeries,
}
