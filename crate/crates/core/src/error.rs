use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} cannot be composed with {right}: {detail}")]
    ArityMismatch {
        left: String,
        right: String,
        detail: String,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid arity ({m},{n}) for {what}")]
    InvalidArity { what: String, m: usize, n: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("inadmissible composition: {0}")]
    Inadmissible(String),
    #[error("not a bialgebra: {0}")]
    NotBialgebra(String),
    #[error("boundary of a 0-dimensional stratum")]
    ZeroDimensional,
    #[error("d^2 != 0 in degree {degree}: witness {witness}")]
    BoundarySquare { degree: usize, witness: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
