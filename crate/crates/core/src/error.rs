use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate register label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown register label `{0}`")]
    UnknownLabel(String),

    #[error("factor for `{label}` is not normalized (norm² = {norm_sqr})")]
    NotNormalized { label: String, norm_sqr: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("register layouts differ")]
    LayoutMismatch,

    #[error("basis index {index} out of range for register `{label}`")]
    BasisIndex { label: String, index: usize },

    #[error("invalid cavity parameters: {0}")]
    InvalidParams(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("malformed input state: {0}")]
    MalformedInput(String),
}
