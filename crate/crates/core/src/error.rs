use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),

    #[error("the empty multi-index has no last variable to remove")]
    EmptyIndex,

    #[error("multi-indices of different modulus are not comparable ({left} vs {right})")]
    ModulusMismatch { left: u32, right: u32 },

    #[error(
        "rank arithmetic for degree {degree}, length {length} exceeds the supported range (degree <= 16, length <= 64)"
    )]
    RankOverflow { degree: u32, length: usize },

    #[error("ranks are 1-based, got {0}")]
    InvalidRank(u64),

    #[error("ordering violates row compatibility at global position {position}: cell ({row}, {column}) but row {row} has only {filled} earlier cells")]
    IncompatiblePrefix {
        position: usize,
        row: usize,
        column: usize,
        filled: usize,
    },

    #[error("ordering table covers positions 1..={available}, position {needed} was requested")]
    OrderingDomain { needed: usize, available: usize },

    #[error("invalid ordering table: {0}")]
    InvalidTable(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("component mixes lengths: expected every index to have length {expected}, found {found}")]
    MixedLength { expected: usize, found: usize },

    #[error("term of length {length} exceeds the cut {cut}")]
    LengthExceedsCut { length: usize, cut: usize },

    #[error("term uses coordinate {length} but the polydisc has dimension {dimension}")]
    DimensionExceeded { length: usize, dimension: usize },

    #[error("invalid polydisc: {0}")]
    InvalidPolydisc(String),

    #[error("grid oracle supports at most 5 dimensions, got {0}")]
    OracleDimension(usize),

    #[error("grid oracle needs at least 8 points per dimension, got {0}")]
    OracleGrid(usize),

    #[error("denominator norm {0:e} is below 1e-12")]
    DegenerateDenominator(f64),

    #[error("invalid partial-sum split s={s}, t={t} for {len} coefficients")]
    InvalidSplit { s: usize, t: usize, len: usize },

    #[error("{count} monomials exceed the desk-scale cap of {cap}")]
    TooManyMonomials { count: u64, cap: u64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
