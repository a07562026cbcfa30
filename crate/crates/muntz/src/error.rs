use thiserror::Error;

/// Crate-wide error type.
///
/// Validation-style variants describe rejected inputs; [`Error::QuadratureNonConvergence`]
/// and [`Error::RankDeficient`] signal numerical failure and carry whatever
/// best estimate is available.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not strictly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("non-positive exponent at index {index}")]
    NonPositiveExponent { index: usize },

    #[error("invalid exponent spec: {reason}")]
    InvalidSpec { reason: String },

    #[error("exponent collision at {value}")]
    ExponentCollision { value: f64 },

    #[error("parameter {name} = {value} must satisfy {constraint}")]
    Parameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("argument {t} outside domain [{lo}, {hi}]")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {bound}")]
    QuadratureNonConvergence { estimate: f64, bound: f64 },

    #[error("exponent mismatch: {reason}")]
    ExponentMismatch { reason: String },

    #[error("index {index} out of range: {reason}")]
    IndexOutOfRange { index: usize, reason: String },

    #[error("matrix numerically rank deficient")]
    RankDeficient,

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

impl Error {
    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            reason: reason.into(),
        }
    }

    pub(crate) fn spec(reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            reason: reason.into(),
        }
    }

    /// True for errors that indicate a numerical breakdown rather than a
    /// rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. } | Error::RankDeficient
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
