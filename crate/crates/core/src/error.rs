use std::fmt;

use thiserror::Error;

/// Which side of the order interval `0 ⪯ B ⪯ S` a covariance violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `B ⪰ 0` failed.
    Lower,
    /// `B ⪯ S` failed.
    Upper,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lower => f.write_str("lower (B >= 0)"),
            Bound::Upper => f.write_str("upper (B <= S)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Jacobi iteration did not converge (off-diagonal residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("matrix is singular ({0})")]
    Singular(String),

    #[error("covariance violates the {side} bound (min eigenvalue of gap {margin:e})")]
    ConstraintViolation { side: Bound, margin: f64 },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// True for errors caused by bad inputs rather than arithmetic breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::NotPsd { .. }
                | Error::ConstraintViolation { .. }
                | Error::UnsupportedDimension { .. }
                | Error::Invalid(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
