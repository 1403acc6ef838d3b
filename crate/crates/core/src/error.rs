use thiserror::Error;

/// Errors raised by the arrangement, critical-point, matrix, monodromy and
/// integration pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lines {0} and {1} are parallel")]
    DegenerateIntersection(usize, usize),

    #[error("arrangement is not generic: {0}")]
    GenericityViolation(String),

    #[error("critical point count mismatch: {0}")]
    CountMismatch(String),

    #[error("newton iteration did not converge from seed ({x}, {y}) after {iterations} iterations")]
    NonConvergence { x: f64, y: f64, iterations: usize },

    #[error("oval trace failed: {0}")]
    TraceFailure(String),

    #[error("oval trace left its face with step {0}")]
    StepTooLarge(f64),

    #[error("evaluation point ({x}, {y}) is within {clearance} of a pole")]
    PoleProximity { x: f64, y: f64, clearance: f64 },

    #[error("path passes through the zero set of line {0}")]
    DegenerateWinding(usize),

    #[error("cycles {0} and {1} share a critical value but pair non-trivially")]
    NonOrthogonalGroup(String, String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
