use thiserror::Error;

use crate::space::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("coordinate `{0}` is not bound at the evaluation point")]
    UnboundCoordinate(String),

    #[error("exp argument must be a polynomial (nested exp is not supported)")]
    NestedExp,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("space failed validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("unknown piece `{0}`")]
    UnknownPiece(String),

    #[error("unknown wedge point `{0}`")]
    UnknownWedge(String),

    #[error("no form given for piece `{0}`")]
    MissingPiece(String),

    #[error("piece forms have mixed grades")]
    MixedGrades,

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("piece forms disagree at wedge point `{0}`")]
    Incompatible(String),

    #[error("coefficient is not a polynomial: {0}")]
    NotPolynomial(String),

    #[error("metric on piece `{0}` has a determinant that is not a unit")]
    NonInvertibleMetric(String),

    #[error("pieces have different dimensions; volume forms need a common dimension")]
    MixedPieceDimensions,

    #[error("{0}")]
    Mismatch(String),

    #[error("space file: {0}")]
    SpaceFile(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
