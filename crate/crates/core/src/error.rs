use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("no monic irreducible of degree {k} over F_{p} found")]
    NoModulus { p: u32, k: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("group closure exceeded cap of {0} elements")]
    ClosureCap(usize),
    #[error("chain enumeration exceeded budget of {0} faces")]
    ChainBudget(usize),
    #[error("node {0} not in poset")]
    NodeNotFound(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shelling construction failed: {0}")]
    Shelling(String),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown gallery entry {0:?}")]
    UnknownGallery(String),
}

pub type Result<T> = std::result::Result<T, Error>;
