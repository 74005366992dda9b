use thiserror::Error;

/// Structural problems with a scenario or one of its parts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be {requirement} (got {value})")]
    InvalidParameter {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("position x = {x} m lies outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("tabulated data for {what}: {reason}")]
    Table { what: &'static str, reason: String },
    #[error("two-phase configuration requires a solid section")]
    MissingSolid,
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, requirement: &'static str, value: f64) -> Self {
        ConfigError::InvalidParameter {
            field,
            requirement,
            value,
        }
    }
}

/// Failures raised while advancing the discretized system.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("phase disappeared at t = {t} s (s = {s} m)")]
    PhaseDisappeared { t: f64, s: f64 },
    #[error("non-finite values at t = {t} s")]
    NumericalBlowup { t: f64 },
    #[error("time step {dt} s exceeds the explicit stability limit {limit} s at t = {t} s")]
    StabilityLimit { t: f64, dt: f64, limit: f64 },
    #[error("invalid time step {0}")]
    InvalidTimeStep(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl StepError {
    /// Simulation time at which the failure happened, when known.
    pub fn time(&self) -> Option<f64> {
        match *self {
            StepError::PhaseDisappeared { t, .. }
            | StepError::NumericalBlowup { t }
            | StepError::StabilityLimit { t, .. } => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("transform parameter epsilon = {epsilon} must lie in (0, {bound})")]
    EpsilonOutOfRange { epsilon: f64, bound: f64 },
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,
    #[error("trajectory is unsuitable: {0}")]
    Structure(String),
}

/// Crate-level error used by the orchestration layer and the C bindings.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
