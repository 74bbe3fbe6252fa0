use crate::numeric::{OdeError, QuadError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("radius {t} outside the domain ({lo}, {hi})")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },
    #[error("invalid warp '{name}': {reason}")]
    InvalidWarp { name: String, reason: String },
    #[error("unknown builtin warp '{0}'")]
    UnknownWarp(String),
    #[error("conjugate point of the Jacobi field in [{lo}, {hi}]")]
    ConjugatePoint { lo: f64, hi: f64 },
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("radius {t} is too close to the polar singularity")]
    PolarSingularity { t: f64 },
    #[error("no compact sphere with mean curvature {h0} (needs H0 > {s_inf})")]
    NoCompactSphere { h0: f64, s_inf: f64 },
    #[error("{what}: no root bracketed below t = {t_max}")]
    RootNotBracketed { what: String, t_max: f64 },
    #[error("no non-existence threshold for radius {r}")]
    NoThreshold { r: f64 },
    #[error("target domain {available} does not cover radius {needed}")]
    DomainTooSmall { needed: f64, available: f64 },
    #[error("gradient blows up at t = {t}")]
    GradientBlowup { t: f64 },
    #[error("solvability undecided: gradient event at t = {t_event} within tolerance of boundary r = {r}")]
    Marginal { t_event: f64, r: f64 },
    #[error("convexity lost at t = {t}")]
    ConvexityLoss { t: f64 },
    #[error("invalid height profile: {0}")]
    InvalidProfile(String),
    #[error("finite-difference oracle failed: {0}")]
    Oracle(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable snake_case identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DimensionTooSmall(_) => "dimension_too_small",
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::InvalidWarp { .. } => "invalid_warp",
            Error::UnknownWarp(_) => "unknown_warp",
            Error::ConjugatePoint { .. } => "conjugate_point",
            Error::Ode(_) => "ode",
            Error::Quadrature(_) => "quadrature",
            Error::PolarSingularity { .. } => "polar_singularity",
            Error::NoCompactSphere { .. } => "no_compact_sphere",
            Error::RootNotBracketed { .. } => "root_not_bracketed",
            Error::NoThreshold { .. } => "no_threshold",
            Error::DomainTooSmall { .. } => "domain_too_small",
            Error::GradientBlowup { .. } => "gradient_blowup",
            Error::Marginal { .. } => "marginal",
            Error::ConvexityLoss { .. } => "convexity_loss",
            Error::InvalidProfile(_) => "invalid_profile",
            Error::Oracle(_) => "oracle",
            Error::Internal(_) => "internal",
        }
    }

    /// Mathematical non-solvability as opposed to misuse or numerical breakdown.
    pub fn is_non_solvable(&self) -> bool {
        matches!(
            self,
            Error::ConjugatePoint { .. }
                | Error::NoCompactSphere { .. }
                | Error::RootNotBracketed { .. }
                | Error::NoThreshold { .. }
                | Error::GradientBlowup { .. }
                | Error::Marginal { .. }
                | Error::ConvexityLoss { .. }
        )
    }
}
