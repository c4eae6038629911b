use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("matrix is not square ({rows} x {cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("vertex id {id} out of range for a graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("vertex {0} is not remaining")]
    NotRemaining(usize),

    #[error("{0} is not a live component")]
    NotComponent(usize),

    #[error("cannot sample from an empty set")]
    EmptySample,

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distribution produced {0}, outside [0, 1]")]
    OutOfUnitRange(f64),

    #[error("sample budget of {0} draws exhausted")]
    SampleCapExceeded(u64),

    #[error("stale bucket report (generation {report}, structure at {current})")]
    StaleReport { report: u64, current: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
