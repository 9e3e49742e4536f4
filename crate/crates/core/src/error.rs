use thiserror::Error;

/// Errors raised while building models, evaluating surfaces, or running checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("no horizon: {0}")]
    NoHorizon(String),
    #[error("root finding failed: {0}")]
    RootFindingFailed(String),
    #[error("point s = {s} outside model domain ({lo}, {hi})")]
    OutsideDomain { s: f64, lo: f64, hi: f64 },
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("surface is not mean-convex: {0}")]
    NotMeanConvex(String),
    #[error("pole singularity: {0}")]
    PoleSingularity(String),
    #[error("invalid region: {0}")]
    RegionInvalid(String),
    #[error("unsupported cross-section: {0}")]
    UnsupportedSection(String),
    #[error("horizon inadmissible: R^N = {scalar_curvature} <= {threshold}")]
    HorizonInadmissible { scalar_curvature: f64, threshold: f64 },
    #[error("model is not asymptotically locally hyperbolic")]
    NotAlh,
    #[error("invalid root: {0}")]
    InvalidRoot(String),
    #[error("expected {expected} horizons, found {found}")]
    HorizonCountMismatch { expected: usize, found: usize },
    #[error("ODE integration failed: {0}")]
    OdeFailure(String),
    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),
    #[error("flow left the model domain at t = {t}")]
    DomainExit { t: f64 },
    #[error("mean convexity lost at t = {t}")]
    MeanConvexityLost { t: f64 },
    #[error("Q functional requires epsilon = -1, model has epsilon = {0}")]
    WrongCosmologicalSign(i32),
    #[error("coefficient is not negative definite: {0}")]
    NotNegativeDefinite(String),
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GeomError {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            GeomError::RootFindingFailed(_)
                | GeomError::QuadratureNotConverged(_)
                | GeomError::PoleSingularity(_)
                | GeomError::OdeFailure(_)
                | GeomError::ExtrapolationUnstable(_)
                | GeomError::DomainExit { .. }
                | GeomError::MeanConvexityLost { .. }
                | GeomError::SolveFailed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
