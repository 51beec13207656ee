use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
#[non_exhaustive]
pub enum GeomError {
    #[error("vector is not strictly interior to the cone: {detail}")]
    NotInterior { detail: String },

    #[error("Lorentz boundary quadratic has negative discriminant {discriminant:.3e}; inputs are inconsistent")]
    NumericalDegeneracy { discriminant: f64 },

    #[error("points are projectively coincident (d_H = {d_h:.3e})")]
    CoincidentPoints { d_h: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid cone specification: {0}")]
    InvalidCone(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not positive: {detail}")]
    NotPositive { detail: String },

    #[error("map is not bi-positive: {detail}")]
    NotBiPositive { detail: String },

    #[error("origin is not interior to the convex body")]
    OriginNotInterior,

    #[error("chord endpoint solve is ill-conditioned: {detail}")]
    ChordDegenerate { detail: String },

    #[error("oracle disagrees with the constructed map (residual {residual:.3e})")]
    OracleInconsistent { residual: f64 },

    #[error("map is not an isometry on sampled pairs (defect {defect:.3e})")]
    NotIsometry { defect: f64 },

    #[error("direction is numerically dependent on the current span (residual {residual:.3e})")]
    DependentDirection { residual: f64 },

    #[error("anchor images are not positively proportional (residual {residual:.3e})")]
    RescaleDegenerate { residual: f64 },

    #[error("oracle does not map segments to segments (residual {residual:.3e})")]
    NotSegmentPreserving { residual: f64 },

    #[error("state is nonpositive ({value:.3e}) on the image of a boundary point")]
    StateVanishes { value: f64 },

    #[error("quotient representative too large for exp (max {max:.3e} > 700); rescale the input")]
    OverflowGuard { max: f64 },

    #[error("adjoint image is not a signed Dirac difference: {detail}")]
    NotIsometricIsomorphism { detail: String },

    #[error("equilateral images mix signs across sources")]
    InconsistentSign,

    #[error("input is not of the form +/-(delta_s - delta_t): {detail}")]
    MalformedInput { detail: String },

    #[error("map is not affine in Log coordinates (residual {residual:.3e})")]
    NotAffineInLog { residual: f64 },
}

impl GeomError {
    /// Stable machine-readable error kind, used by the CLI JSON error shape.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::NotInterior { .. } => "NotInterior",
            GeomError::NumericalDegeneracy { .. } => "NumericalDegeneracy",
            GeomError::CoincidentPoints { .. } => "CoincidentPoints",
            GeomError::DimensionMismatch { .. } => "DimensionMismatch",
            GeomError::InvalidCone(_) => "InvalidCone",
            GeomError::InvalidParameter(_) => "InvalidParameter",
            GeomError::NotPositive { .. } => "NotPositive",
            GeomError::NotBiPositive { .. } => "NotBiPositive",
            GeomError::OriginNotInterior => "OriginNotInterior",
            GeomError::ChordDegenerate { .. } => "ChordDegenerate",
            GeomError::OracleInconsistent { .. } => "OracleInconsistent",
            GeomError::NotIsometry { .. } => "NotIsometry",
            GeomError::DependentDirection { .. } => "DependentDirection",
            GeomError::RescaleDegenerate { .. } => "RescaleDegenerate",
            GeomError::NotSegmentPreserving { .. } => "NotSegmentPreserving",
            GeomError::StateVanishes { .. } => "StateVanishes",
            GeomError::OverflowGuard { .. } => "OverflowGuard",
            GeomError::NotIsometricIsomorphism { .. } => "NotIsometricIsomorphism",
            GeomError::InconsistentSign => "InconsistentSign",
            GeomError::MalformedInput { .. } => "MalformedInput",
            GeomError::NotAffineInLog { .. } => "NotAffineInLog",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
