use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VarIndexOutOfRange { index: usize, num_vars: usize },

    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("cannot homogenize a degree-{degree} polynomial to degree {target}")]
    HomogenizationDegree { degree: u32, target: u32 },

    #[error("degree parameter d must be even, got {0}")]
    OddDegree(u32),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid subset selector: {0}")]
    InvalidSelector(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size guard exceeded: {what} is {size}, limit {limit}")]
    Budget { what: String, size: u128, limit: u128 },

    #[error("degenerate elimination: {0}")]
    Degenerate(String),

    #[error("ceiling violated: {0}")]
    CeilingViolation(String),

    #[error("comparison undecided: {0}")]
    Undecided(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
