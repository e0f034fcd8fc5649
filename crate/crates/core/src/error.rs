//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the geometric and algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector {0} does not span an extremal ray of the cone")]
    NotExtremalRay(String),

    #[error("polyhedra have different tail cones")]
    TailMismatch,

    #[error("quasifans have different supports")]
    SupportMismatch,

    #[error("cone is not pointed")]
    NotPointed,

    #[error("degree {0} lies outside the weight cone")]
    OutsideWeightCone(String),

    #[error("operation is not available on this curve: {0}")]
    UnsupportedCurve(String),

    #[error("divisor has non-integral coefficients")]
    NonIntegral,

    #[error("divisor evaluated at {0} is not integral")]
    NonIntegralDivisor(String),

    #[error("shift vector {0} is not a lattice vector")]
    NonLatticeShift(String),

    #[error("not in the algebra: {0}")]
    MembershipViolation(String),

    #[error("degree {0} is not in the admissible set for this ray")]
    NotInSRho(String),

    #[error("derivation conditions fail: {0}")]
    ConditionViolated(String),

    #[error("lattice search in cell {0} exceeded its budget")]
    InconclusiveRealization(String),

    #[error("no admissible degree found within norm {0}")]
    NotFoundWithinBound(i64),

    #[error("unknown derivation class {0}")]
    UnknownClass(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("failed to parse {0:?} as a rational number")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
