use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("moment of order {requested} requested but only {available} stored")]
    OrderExceeded { requested: usize, available: usize },

    #[error("operation `{op}` is not supported for {kind} measures")]
    UnsupportedKind { op: &'static str, kind: &'static str },

    #[error("numerical breakdown at degree {degree}: recurrence coefficient a = {value:e}")]
    NumericalBreakdown { degree: usize, value: f64 },

    #[error("degree {degree} is degenerate: measure has only {support} support points")]
    DegenerateDegree { degree: usize, support: usize },

    #[error("recurrence table of order {order} is too short for degree {needed}")]
    TableTooShort { order: usize, needed: usize },

    #[error("truncation overflow in cell {cell}: degree {degree} exceeds degree cut {cut}")]
    TruncationOverflow { cell: usize, degree: usize, cut: usize },

    #[error("{ops} operators applied to the vacuum exceed the particle cut {cut}")]
    ParticleCutExceeded { ops: usize, cut: usize },

    #[error("dense tensor of order {order} over {dim} modes exceeds the size limit")]
    SizeExceeded { order: usize, dim: usize },

    #[error("chaos coefficient tuple {0:?} repeats a cell")]
    RepeatedCell(Vec<usize>),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("cell index {cell} out of range for {cells} cells")]
    CellOutOfRange { cell: usize, cells: usize },

    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(u64),

    #[error("operator is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
