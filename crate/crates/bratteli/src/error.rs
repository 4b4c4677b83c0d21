use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level {level} outside window [{min}, {max}]")]
    LevelOutOfWindow { level: i64, min: i64, max: i64 },
    #[error("depth {requested} exceeds the available window depth {available}")]
    DepthExceedsWindow { requested: usize, available: usize },
    #[error("level-0 vertex counts differ: {positive} vs {negative}")]
    WeldMismatch { positive: usize, negative: usize },
    #[error("invalid telescoping cuts: {0}")]
    BadCuts(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("missing weight: {0}")]
    MissingWeight(String),
    #[error("weights fail validation: {0}")]
    InvalidWeights(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("point outside domain: {0}")]
    OutsideDomain(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for failures caused by a too-small truncation window.
    pub fn is_depth_error(&self) -> bool {
        matches!(
            self,
            Error::LevelOutOfWindow { .. } | Error::DepthExceedsWindow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
