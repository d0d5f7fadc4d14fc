use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix entry {value} at ({row}, {col})")]
    InvalidEntry { row: usize, col: usize, value: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no construction recipe realizes order {order}{}", nearest_hint(*.nearest))]
    NoRecipe { order: u64, nearest: Option<u64> },

    #[error("cannot parse recipe {input:?}: {reason}")]
    RecipeParse { input: String, reason: String },

    #[error("sieve limit {limit} too small: {reason}")]
    InsufficientHeadroom { limit: u64, reason: String },

    #[error("order {0} lies below the smallest known Hadamard order")]
    BelowSmallestOrder(u64),

    #[error("witness corrupt: {0}")]
    WitnessCorrupt(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("sieve cache: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn nearest_hint(nearest: Option<u64>) -> String {
    match nearest {
        Some(n) => format!("; nearest realizable order is {n}"),
        None => String::new(),
    }
}
