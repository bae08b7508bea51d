use thiserror::Error;

use crate::mapping::ExistenceReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no structured solution exists (range defect {:.3e}, symmetry defect {:.3e})", .0.defect_range, .0.defect_symmetry)]
    NotSolvable(Box<ExistenceReport>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bad structure spec: {0}")]
    BadStructureSpec(String),

    #[error("matrix is not in the structured class (defect {defect:.3e})")]
    NotStructured { defect: f64 },

    /// Bilinear subspace problem with a complex basis where the solvability
    /// condition fails.
    #[error("subspace problem not solvable for complex basis under a bilinear form (symmetry defect {defect:.3e})")]
    ConditionallyUnsolvable { defect: f64 },

    #[error("matrix is not a contraction (spectral norm {norm:.6e})")]
    NotContraction { norm: f64 },

    #[error("mu = {mu:.6e} is below the dilation lower bound (column norm {col_norm:.6e}, row norm {row_norm:.6e})")]
    MuTooSmall { mu: f64, col_norm: f64, row_norm: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSolvable(_) => "NotSolvable",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::BadStructureSpec(_) | Error::UnknownPreset(_) => "BadStructureSpec",
            Error::NotStructured { .. } => "NotStructured",
            Error::ConditionallyUnsolvable { .. } => "ConditionallyUnsolvable",
            Error::NotContraction { .. } => "NotContraction",
            Error::MuTooSmall { .. } => "MuTooSmall",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
