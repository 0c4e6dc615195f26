use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch between {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    Dimension {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: length mismatch, expected {expected} got {actual}")]
    Length {
        op: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{op}: dimensions overflow")]
    Overflow { op: &'static str },

    #[error("matrix is rank deficient (rank {rank}, {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown code identifier `{0}`")]
    UnknownCode(String),

    #[error("table too large: {estimate} entries exceeds limit {limit}")]
    TableTooLarge { estimate: u128, limit: u128 },

    #[error("generator matrix is not systematic; call systematic_form first")]
    NotSystematic,

    #[error(
        "lookup table conflict: {first} and {second} share syndrome {syndrome} but differ by a non-stabilizer"
    )]
    Conflict {
        syndrome: String,
        first: String,
        second: String,
    },

    #[error("row {row} of the product syndrome failed to decode")]
    RowDecode { row: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(op: &'static str, a: (usize, usize), b: (usize, usize)) -> Self {
        Error::Dimension {
            op,
            left_rows: a.0,
            left_cols: a.1,
            right_rows: b.0,
            right_cols: b.1,
        }
    }
}
