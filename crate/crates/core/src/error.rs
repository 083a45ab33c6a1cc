use thiserror::Error;

use crate::curve::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed curve: {0}")]
    Malformed(String),
    #[error("input is not generic: {0}")]
    Genericity(ValidationReport),
    #[error("invalid bridge: {0}")]
    BridgeInvalid(ValidationReport),
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("vector is tangent to the curve")]
    TangentVector,
    #[error("location is a double point of the curve")]
    BaseOnDoublePoint,
    #[error("degenerate arc: {0}")]
    DegenerateArc(String),
    #[error("not an interior crossing of the bridge")]
    NotAnInteriorCrossing,
    #[error("curve is not simple")]
    NotSimple,
    #[error("curves are not separated")]
    NotSeparated,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("construction degenerate: {0}")]
    ConstructionDegenerate(String),
    #[error("no generic translation direction found after {0} samples")]
    NoGenericDirection(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
