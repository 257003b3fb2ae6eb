//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected {expected} variables, got {got}")]
    VarCount { expected: usize, got: usize },

    #[error("relation must be monic (up to a rational unit) of positive degree in `{0}`")]
    NotMonic(String),

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("derivation is not tangent: it sends the relation to `{0}`")]
    NotTangent(String),

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("cofactor identity fails: {0}")]
    CofactorIdentity(String),

    #[error("no expansion over the declared generators with coefficients of degree <= {0}")]
    NoExpansion(u32),

    #[error("value is not central up to degree {0}: not a ring multiple of the idempotent")]
    NotCentral(u32),

    #[error("operation requires a ring with exactly {expected} variables, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("{0}")]
    Invalid(String),
}
