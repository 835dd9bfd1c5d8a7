use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("row {row}, column `{column}`: value `{value}` is outside the declared domain")]
    ValueOutOfDomain {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}, column `{column}`: missing value")]
    MissingValue { row: usize, column: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("operation requires labeled data")]
    UnlabeledData,

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("conditioning context has no rows")]
    EmptyContext,

    #[error("value outside the valid domain: {0}")]
    Domain(String),

    #[error("distributions have no common ordering: {0}")]
    IncomparableSupports(String),

    #[error("knowledge table too large: {cells} cells exceeds budget {budget}")]
    ArityOverflow { cells: usize, budget: usize },

    #[error("knowledge document format error: {0}")]
    Format(String),

    #[error("distribution sums to {sum}, not 1 (tolerance {tolerance})")]
    Normalization { sum: f64, tolerance: f64 },

    #[error("path is not a subpath of the current path")]
    SubsetViolation,

    #[error("insufficient target knowledge: {0}")]
    InsufficientKnowledge(String),

    #[error("protected group `{0}` has no rows")]
    GroupMissing(String),

    #[error("protected group `{0}` has no positive ground-truth rows")]
    NoPositives(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for broken invariants, 1 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 2,
            _ => 1,
        }
    }
}
