use thiserror::Error;

use crate::mat::Domain;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain mismatch: expected {expected}, found {found}")]
    Domain { expected: Domain, found: Domain },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Numerical failure: non-convergence, ill-conditioned split, singular system.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Linear system without full rank.
    #[error("singular system: numerical rank {rank} of {size}")]
    Singular { rank: usize, size: usize },
    /// Dependence detection could not decide between two degrees.
    #[error("ambiguous minimal polynomial degree: {low} or {high}")]
    AmbiguousDegree { low: usize, high: usize },
    /// A randomized procedure exhausted its budget without a certified answer.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    /// Input generates a reducible algebra; carries the invariant-subspace witness.
    #[error("reducible input: {0}")]
    Reducible(Box<crate::semigroup::InvariantSubspace>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
