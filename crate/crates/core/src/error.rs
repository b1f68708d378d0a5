use thiserror::Error;

/// Errors raised by geometry, solver and verification routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point does not belong to this space: {0}")]
    MismatchedSpace(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid space description: {0}")]
    InvalidSpace(String),

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("comparison angles increased while shrinking (stage {stage}: {previous} -> {current})")]
    NonMonotoneAngle { stage: usize, previous: f64, current: f64 },

    #[error("inconsistent metric data: {0}")]
    InconsistentMetric(String),

    #[error("direction set has angular diameter {diameter} > pi/2")]
    DiameterTooLarge { diameter: f64 },

    #[error("directions are based at different points")]
    BasepointMismatch,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("point outside the objective domain")]
    DomainViolation,

    #[error("step {tau} too large for a {lambda}-convex objective (need tau < {limit})")]
    StepTooLarge { tau: f64, lambda: f64, limit: f64 },

    #[error("solver did not converge (best value found {best})")]
    NonConvergence { best: f64 },

    #[error("time map is not non-decreasing at sample {index}")]
    NonMonotoneTimeMap { index: usize },

    #[error("time {0} is not a sample time of the curve")]
    NotASampleTime(f64),

    #[error("mismatched step schedules")]
    MismatchedSchedules,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
