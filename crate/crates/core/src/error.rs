use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty permutation")]
    EmptyPermutation,
    #[error("value {value} at position {position} is outside 1..={n}")]
    OutOfRange {
        position: usize,
        value: u64,
        n: usize,
    },
    #[error("value {value} appears more than once")]
    DuplicateValue { value: u64 },
    #[error("pattern of length {0} is not supported (maximum 4)")]
    PatternTooLong(usize),
    #[error("{what} = {value} outside the supported range {min}..={max}")]
    Guard {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("invalid Dyck word: {0}")]
    InvalidDyck(String),
    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),
    #[error("operation needs a tree with at least two vertices")]
    TrivialTree,
    #[error("permutation contains the pattern 321")]
    Contains321,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid probability parameter {0}; expected a value in (0, 1)")]
    InvalidParameter(f64),
    #[error("offspring law has mean {0}, which exceeds 1")]
    Supercritical(f64),
    #[error("node cap of {cap} vertices exceeded")]
    Overflow { cap: usize },
    #[error("degenerate contingency table ({rows} x {cols} after merging)")]
    DegenerateTable { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
