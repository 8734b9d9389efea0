//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("simplex did not converge within {iterations} pivots (best value {best_value})")]
    LpIterationCap { iterations: usize, best_value: f64, incumbent: Vec<f64> },

    #[error("linear program is unbounded along column {column}")]
    LpUnbounded { column: usize },

    #[error(
        "projection stopped at duality gap {gap:.3e} > tol {tol:.3e} after {iterations} iterations"
    )]
    ProjectionIterationCap { gap: f64, tol: f64, iterations: usize },

    #[error("delta {delta} out of range: requires 0 < delta < {bound} = r/(sqrt(n)+1)")]
    DeltaOutOfRange { delta: f64, bound: f64 },

    #[error("point outside the unit cube at coordinate {coordinate} (value {value})")]
    OutsideUnitCube { coordinate: usize, value: f64 },

    #[error("infeasible probe point: {0}")]
    InfeasibleProbe(String),

    #[error("oracle bank needs at least one oracle (got K = 0)")]
    EmptyOracleBank,

    #[error("oracle index {index} out of range (K = {count})")]
    OracleIndexOutOfRange { index: usize, count: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("graph parse error at {path}:{line}: {message}")]
    GraphParse { path: String, line: usize, message: String },

    #[error("objective/constraint mismatch: {0}")]
    InvalidObjective(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code taxonomy: config errors exit 2, numerical failures 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::InvalidSchedule(_)
            | Error::Json(_)
            | Error::GraphParse { .. }
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
