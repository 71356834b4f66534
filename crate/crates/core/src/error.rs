use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

use crate::independence::Certificate;
use crate::space::TriangleViolation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("malformed rational {0:?}: expected \"p/q\", \"0\" or \"1\"")]
    Syntax(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("rational {0} is not in lowest terms")]
    NotReduced(String),
    #[error("distance {0} is outside [0, 1]")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("distance from {0:?} to itself must be 0")]
    NonzeroDiagonal(String),
    #[error("no distance given between {0:?} and {1:?}")]
    MissingDistance(String, String),
    #[error("conflicting distances given between {0:?} and {1:?}")]
    ConflictingDistance(String, String),
    #[error("asymmetric distance between {0:?} and {1:?}")]
    Asymmetric(String, String),
    #[error("triangle inequality fails: {0}")]
    Triangle(Box<TriangleViolation>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not independent: {0}")]
    NotIndependent(Box<Certificate>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
