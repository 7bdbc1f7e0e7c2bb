use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical layers and the experiment drivers.
#[derive(Debug, Error)]
pub enum BandError {
    /// A factorization met a pivot below the relative floor. For the
    /// Gaussian ensembles used here this is a probability-zero event, so
    /// callers resample the replica and count the flag.
    #[error("near-singular matrix: pivot {pivot:.3e} below floor {floor:.3e}")]
    NearSingular { pivot: f64, floor: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The one-dimensional density cannot be normalized.
    #[error("density is not integrable: {0}")]
    Integrability(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("{0}")]
    Config(String),

    /// Flag rate exceeded the abort threshold.
    #[error("exclusion rate too high: {flags} flags over {replicas} replicas at M={m}")]
    ExclusionRate { m: usize, flags: u64, replicas: u64 },

    /// A self-check ran but did not meet its tolerance.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BandError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BandError::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code contract of the command-line tool: 2 for configuration
    /// problems, 3 for everything that happens at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            BandError::Config(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-parsable tag used as the error-line prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            BandError::NearSingular { .. } => "near-singular",
            BandError::Dimension(_) => "dimension",
            BandError::Domain(_) => "domain",
            BandError::Integrability(_) => "integrability",
            BandError::DegenerateFit(_) => "degenerate-fit",
            BandError::Config(_) => "config",
            BandError::ExclusionRate { .. } => "exclusion-rate",
            BandError::CheckFailed(_) => "check-failed",
            BandError::Io { .. } => "io",
            BandError::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, BandError>;
