//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the numeric and symbolic routines.
///
/// Every fallible operation returns one of these variants; nothing in the
/// crate panics on bad input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain of the operation.
    #[error("argument error: {0}")]
    Argument(String),

    /// The operation was asked to evaluate at a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// A symbolic value could not be evaluated numerically.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A series that must be even (or odd) has a coefficient of the wrong parity.
    #[error("parity error: nonzero coefficient at degree {degree}")]
    Parity { degree: i32 },

    /// Inversion of a series whose leading coefficient vanishes or is not rational.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A product of two transcendental symbols was requested.
    #[error("product of non-rational symbolic constants: ({0}) * ({1})")]
    NonRationalProduct(String, String),

    /// The series (#) path was requested for a profile not known to be analytic.
    #[error("licensing error: {0}")]
    Licensing(String),

    /// A numeric procedure failed to reach the requested tolerance.
    #[error("accuracy error: estimate {estimate:e} exceeds tolerance {tolerance:e} (partial result {partial})")]
    Accuracy {
        partial: String,
        estimate: f64,
        tolerance: f64,
    },

    /// Two independent evaluation paths or a structural identity disagree.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
