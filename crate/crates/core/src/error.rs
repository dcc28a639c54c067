use thiserror::Error;

use crate::polyring::Sl2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("torus link parameter k must be at least 2, got {0}")]
    InvalidK(i64),

    #[error("polynomial is not symmetric in x1, x2: {0}")]
    NotSymmetric(String),

    #[error("matrix entry ({row}, {col}) = {entry} has the wrong q-degree (expected {expected})")]
    Inhomogeneous { row: usize, col: usize, entry: String, expected: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("action value {g}.{basis} is not homogeneous of the required degree")]
    BadActionDegree { g: Sl2, basis: String },

    #[error("cohomological degree {degree}: {reason}")]
    StructureViolation { degree: usize, reason: String },

    #[error("{g} applied to relation {relation} leaves the relation submodule at weight {weight}")]
    WellDefinednessFailure { g: Sl2, relation: String, weight: i64 },

    #[error("character accounting failed at weight {weight}: {detail}")]
    CharacterMismatch { weight: i64, detail: String },

    #[error("weights are only defined on the normalized complex")]
    NotNormalized,

    #[error("cohomological degree {degree} is outside 0..={k}")]
    DegreeOutOfRange { degree: i64, k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
