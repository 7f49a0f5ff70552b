use thiserror::Error;

use crate::graded::les::LesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sheaf {sheaf} is not defined on a quadric of dimension {n}")]
    ParityMismatch { n: u32, sheaf: String },

    #[error("quadric dimension must be at least 1, got {0}")]
    InvalidQuadricDim(i64),

    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(i64),

    #[error("unsupported pair: Hom({from}, {to})")]
    UnsupportedPair { from: String, to: String },

    #[error("indeterminate Hom({from}, {to}) in degrees {degrees:?}")]
    Indeterminate {
        from: String,
        to: String,
        degrees: Vec<i64>,
    },

    #[error("inconsistent long exact sequence for Hom({from}, {to}) in degree {degree}")]
    Inconsistent { from: String, to: String, degree: i64 },

    #[error("unknown generator: {0}")]
    UnknownGenerator(String),

    #[error("object {0} is not exceptional")]
    NotExceptional(String),

    #[error("rule not applicable: {0}")]
    RuleNotApplicable(String),

    #[error("non-integral value: {0}")]
    NonIntegral(String),

    #[error("operation undefined: {0}")]
    Undefined(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

impl Error {
    pub(crate) fn from_les(err: LesError, from: impl ToString, to: impl ToString) -> Self {
        match err {
            LesError::Indeterminate(degrees) => Error::Indeterminate {
                from: from.to_string(),
                to: to.to_string(),
                degrees,
            },
            LesError::Inconsistent(degree) => Error::Inconsistent {
                from: from.to_string(),
                to: to.to_string(),
                degree,
            },
        }
    }

    /// True for the outcomes the engine refuses to guess.
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::Indeterminate { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
