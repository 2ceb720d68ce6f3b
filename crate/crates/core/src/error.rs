use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),

    #[error("field shape mismatch: {0}")]
    Shape(String),

    #[error(
        "SOR did not converge{} after {iterations} sweeps (residual {residual:.3e}, target {target:.3e})",
        component.map(|c| format!(" for component {c}")).unwrap_or_default()
    )]
    NoConvergence {
        component: Option<usize>,
        iterations: usize,
        residual: f64,
        target: f64,
        history: Vec<f64>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Bad command line; the message is the full usage text.
    #[error("{0}")]
    Usage(String),

    /// `--help` or `--version` was requested.
    #[error("{0}")]
    Help(String),

    #[error("{path}: malformed file: {msg}")]
    Parse { path: PathBuf, msg: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Help(_) => 0,
            Error::NoConvergence { .. } => 3,
            Error::Io { .. } | Error::Parse { .. } => 4,
            _ => 2,
        }
    }
}
