use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {0:e} is too small to define a projective point")]
    ZeroVector(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("phase {index} is absent but radius {radius:e} requires it")]
    MissingPhase { index: usize, radius: f64 },

    #[error("coordinate {index} is on the octant edge (radius {radius:e}); coordinates are degenerate there")]
    EdgePoint { index: usize, radius: f64 },

    #[error("invalid octant coordinates: {0}")]
    InvalidCoordinates(String),

    #[error("point lies outside the chart domain")]
    OutsideChart,

    #[error("geodesic endpoints coincide or are antipodal")]
    DegeneratePair,

    #[error("state is not maximally entangled (residual {0:e})")]
    NotMaxEntangled(f64),

    #[error("Schmidt angle {0} outside the open interval (0, π/4)")]
    InvalidSigma(f64),

    #[error("distance {0} outside (0, π/2]")]
    InvalidRadius(f64),

    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
}
