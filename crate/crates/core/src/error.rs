use thiserror::Error;

/// Errors surfaced by geometry operations. Preconditions that callers can
/// violate map to dedicated variants so the CLI can name them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("matrix has non-positive determinant {det}; not a point of the identity component")]
    NonPositiveDeterminant { det: f64 },

    #[error("plane spanned by the two vectors is degenerate (|denominator| = {denom:.3e})")]
    DegeneratePlane { denom: f64 },

    #[error("vector is not lightlike (q = {q:.6e})")]
    NotLightlike { q: f64 },

    #[error(
        "timelike vector with b = c within tolerance; timecone side is numerically degenerate"
    )]
    DegenerateTimecone,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("metric is singular on the frame")]
    SingularMetric,

    #[error("operator is not k-symmetric (residual {residual:.3e})")]
    NotKSymmetric { residual: f64 },

    #[error("bilinear form is not symmetric (residual {residual:.3e})")]
    NotSymmetricForm { residual: f64 },

    #[error("tidal force direction is not orthogonal to the velocity (k(v,y) = {pairing:.3e})")]
    NotOrthogonal { pairing: f64 },

    #[error("parallel transport is defined from the identity; got a different start point")]
    NonIdentityStart,

    #[error("step count must be at least 1")]
    ZeroSteps,

    #[error("matrix is not symmetric positive-definite")]
    NotSpd,

    #[error("cover coordinates do not describe a positive-definite matrix")]
    NotCoverCoords,

    #[error("cover product formula broke down: trace denominator {denom:.3e} is numerically zero")]
    FormulaBreakdown { denom: f64 },

    #[error("mode-matching system is singular")]
    SingularModeSystem,
}

impl GeomError {
    /// Stable short name of the variant, for machine-readable error
    /// reporting.
    pub fn name(&self) -> &'static str {
        match self {
            GeomError::NonPositiveDeterminant { .. } => "non-positive-determinant",
            GeomError::DegeneratePlane { .. } => "degenerate-plane",
            GeomError::NotLightlike { .. } => "not-lightlike",
            GeomError::DegenerateTimecone => "degenerate-timecone",
            GeomError::InvalidInput(_) => "invalid-input",
            GeomError::SingularMetric => "singular-metric",
            GeomError::NotKSymmetric { .. } => "not-k-symmetric",
            GeomError::NotSymmetricForm { .. } => "not-symmetric-form",
            GeomError::NotOrthogonal { .. } => "not-orthogonal",
            GeomError::NonIdentityStart => "non-identity-start",
            GeomError::ZeroSteps => "zero-steps",
            GeomError::NotSpd => "not-spd",
            GeomError::NotCoverCoords => "not-cover-coords",
            GeomError::FormulaBreakdown { .. } => "formula-breakdown",
            GeomError::SingularModeSystem => "singular-mode-system",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
