//! Typed errors for the boundary-condition library.

use thiserror::Error;

/// Every failure mode reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A metric component is NaN or infinite.
    #[error("metric has a non-finite component")]
    NonFiniteMetric,
    /// The 3×3 metric matrix is numerically singular.
    #[error("metric is singular: |det| = {det:e} is below {threshold:e}")]
    SingularMetric { det: f64, threshold: f64 },
    /// Mean-flow state violates positivity or finiteness.
    #[error("invalid mean flow: {0}")]
    InvalidFlow(String),
    /// An analytic mapping produced a singular Jacobian at a grid node.
    #[error("mapping is singular at node ({i}, {j}, {k})")]
    SingularMapping { i: usize, j: usize, k: usize },
    /// The mapping name is not in the registry.
    #[error("unknown mapping `{0}`")]
    UnknownMapping(String),
    /// Mapping parameters are missing or out of range.
    #[error("invalid mapping parameters: {0}")]
    InvalidMappingParams(String),
    /// A structured-grid file could not be read or parsed.
    #[error("grid file: {0}")]
    GridFile(String),
    /// Cartesian flux matrices assume unit mean density and sound speed.
    #[error("operation requires a nondimensional mean flow (rho_bar = c_bar = 1)")]
    DimensionalModeUnsupported,
    /// Two independent constructions of the same object disagree.
    #[error("internal inconsistency in {context}: deviation {deviation:e}")]
    InternalInconsistency { context: String, deviation: f64 },
    /// |xi| equals |U|, so the acoustic quadratic degenerates.
    #[error("sonic contravariant velocity: |U| = |xi|")]
    SonicDegenerate,
    /// U = 0, so the convective roots are undefined.
    #[error("zero contravariant velocity normal to the boundary")]
    CriticalStreamwise,
    /// The prefactor of the acoustic root formula vanishes.
    #[error("vanishing acoustic prefactor (Xi + mu U = 0)")]
    DegeneratePrefactor,
    /// The wave-vector image alpha is zero.
    #[error("zero alpha vector: group velocity undefined")]
    ZeroAlphaVector,
    /// A normalization length (|xi|, Psi2 or Psi3) vanishes.
    #[error("degenerate normalization: {0} vanishes")]
    DegenerateNormalization(&'static str),
    /// The analysis requires an orthogonal grid.
    #[error("grid is not orthogonal at the boundary point")]
    NonOrthogonalGrid,
    /// The analysis requires V = W = 0.
    #[error("tangential contravariant velocity is nonzero; apply moving_frame first")]
    NotMovingFrame,
    /// The denominator of a modified-BC coefficient vanishes.
    #[error("degenerate denominator in modified coefficient {0}")]
    DegenerateDenominator(&'static str),
    /// Mode index outside 1..=5.
    #[error("mode index {0} outside 1..=5")]
    InvalidModeIndex(usize),
    /// Subsonic normal flow is required.
    #[error("flow must be subsonic with 0 < U < |xi|")]
    NotSubsonic,
    /// An argument is outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFiniteMetric => "NonFiniteMetric",
            Error::SingularMetric { .. } => "SingularMetric",
            Error::InvalidFlow(_) => "InvalidFlow",
            Error::SingularMapping { .. } => "SingularMapping",
            Error::UnknownMapping(_) => "UnknownMapping",
            Error::InvalidMappingParams(_) => "InvalidMappingParams",
            Error::GridFile(_) => "GridFile",
            Error::DimensionalModeUnsupported => "DimensionalModeUnsupported",
            Error::InternalInconsistency { .. } => "InternalInconsistency",
            Error::SonicDegenerate => "SonicDegenerate",
            Error::CriticalStreamwise => "CriticalStreamwise",
            Error::DegeneratePrefactor => "DegeneratePrefactor",
            Error::ZeroAlphaVector => "ZeroAlphaVector",
            Error::DegenerateNormalization(_) => "DegenerateNormalization",
            Error::NonOrthogonalGrid => "NonOrthogonalGrid",
            Error::NotMovingFrame => "NotMovingFrame",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::InvalidModeIndex(_) => "InvalidModeIndex",
            Error::NotSubsonic => "NotSubsonic",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;
