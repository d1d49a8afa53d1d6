use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid root system: {0}")]
    InvalidRoot(String),
    #[error("radical nonzero")]
    Degenerate,
    #[error("brute-force bound exceeded: group order {order} > {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("odd lattice")]
    OddLattice,
    #[error("saturate input first")]
    NotPrimitive,
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("rank mismatch: L_S has rank {got}, expected {expected}")]
    RankMismatch { got: usize, expected: usize },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("not mutable along (m,g): weight {0} not divisible")]
    NotMutable(i64),
    #[error("not a Laurent polynomial: {0}")]
    NotLaurent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
