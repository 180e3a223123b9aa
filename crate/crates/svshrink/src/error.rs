use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] svshrink_core::Error),
    #[error("svd failed: {0}")]
    Svd(String),
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("csv error at row {row}, column {col}: {message}")]
    Csv { row: usize, col: usize, message: String },
    #[error(transparent)]
    CsvWrite(#[from] csv::Error),
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Model(svshrink_core::Error::SignalAnnihilated) => "signal_annihilated",
            Error::Model(_) => "invalid_model",
            Error::Svd(_) => "svd_failure",
            Error::NonFinite { .. } => "non_finite",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::Csv { .. } | Error::CsvWrite(_) => "csv",
            Error::EmptyMatrix => "empty_matrix",
            Error::UnknownExperiment(_) => "unknown_experiment",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
