use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] oscmirror::Error),

    #[error("parameters outside the adiabatic regime: {0}")]
    NonAdiabatic(String),

    #[error("{failed} of {total} oracle checks failed: {names}")]
    Validation { failed: usize, total: usize, names: String },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Model(_) | CliError::NonAdiabatic(_) => 2,
            CliError::Validation { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    /// Stable identifier printed in the diagnostic line.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Model(e) => match e {
                oscmirror::Error::ConfigIo { .. } => "config_io",
                oscmirror::Error::ConfigFormat { .. } => "config_format",
                oscmirror::Error::InvalidParam { .. } => "invalid_param",
                oscmirror::Error::InvalidGrid(_) => "invalid_grid",
                oscmirror::Error::UnsupportedOrientation(_) => "unsupported_orientation",
                oscmirror::Error::QuadratureNonConvergence { .. } => "quadrature",
                oscmirror::Error::EmptySeries => "empty_series",
            },
            CliError::NonAdiabatic(_) => "non_adiabatic",
            CliError::Validation { .. } => "validation",
            CliError::Io { .. } => "io",
        }
    }

    /// `error kind=<kind> exit=<code> message="<json-escaped text>"`
    pub fn diagnostic(&self) -> String {
        let message = serde_json::to_string(&self.to_string().replace('\n', " ")).expect("string serializes");
        format!("error kind={} exit={} message={}", self.kind(), self.exit_code(), message)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
