use thiserror::Error;

/// Errors raised by the entropy pipelines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CveError {
    #[error("singular matrix: |det| = {det:e} is not above {tol:e} times the squared largest entry")]
    SingularMatrix { det: f64, tol: f64 },

    #[error("non-physical trace {trace}: a reduced state needs trace >= 2")]
    NonPhysicalTrace { trace: f64 },

    #[error("logarithm branch error: {0}")]
    BranchError(String),

    #[error("degenerate reduction: {0}")]
    DegenerateReduction(String),

    #[error("partition function diverges: det(exp(beta N) - 1) = {0:e}")]
    DivergentPartition(f64),

    #[error("entropy diverges: lambda = {lambda} is at the infinite-squeezing limit")]
    EntropyDiverges { lambda: f64 },

    #[error("product state: |delta| = {delta:e} is below tolerance")]
    ProductState { delta: f64 },

    #[error("invalid phase: phi = {phi} is not {l} * pi/2")]
    InvalidPhase { phi: f64, l: i64 },

    #[error("cutoff {cutoff} too small: truncated tail mass {tail:e} (the ceiling can be raised with CVE_MAX_CUTOFF)")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("formula mismatch: max deviation {max_dev:e} from the oracle spectrum")]
    FormulaMismatch {
        max_dev: f64,
        formula: Vec<f64>,
        oracle: Vec<f64>,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl CveError {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        CveError::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CveError::InvalidParameter { .. }
            | CveError::InvalidPhase { .. }
            | CveError::CutoffTooSmall { .. } => 2,
            CveError::EntropyDiverges { .. } | CveError::DivergentPartition(_) => 3,
            CveError::InvariantViolation(_)
            | CveError::NonPhysicalTrace { .. }
            | CveError::BranchError(_) => 4,
            CveError::DegenerateReduction(_)
            | CveError::SingularMatrix { .. }
            | CveError::ProductState { .. } => 5,
            CveError::FormulaMismatch { .. } => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, CveError>;
