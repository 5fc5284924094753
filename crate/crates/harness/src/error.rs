use std::path::PathBuf;

use feast_core::linalg::LinalgError;
use feast_core::quadrature::QuadratureError;
use feast_core::FeastError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Feast(#[from] FeastError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl HarnessError {
    /// `true` for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        let linalg = match self {
            Self::Linalg(e) | Self::Feast(FeastError::Linalg(e)) => e,
            _ => return false,
        };
        matches!(
            linalg,
            LinalgError::Singular { .. } | LinalgError::SubspaceBreakdown(_) | LinalgError::NotPositiveDefinite { .. }
        )
    }

    /// Short machine-readable category for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Io { .. } => "io",
            Self::Parse { .. } => "parse",
            Self::Input(_) | Self::Quadrature(_) | Self::Feast(FeastError::InvalidConfig(_)) => "input",
            _ if self.is_numerical() => "numerical",
            _ => "input",
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
