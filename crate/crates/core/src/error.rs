use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("zero generator")]
    ZeroGenerator,
    #[error("not in hull (distance {0:e})")]
    NotInHull(f64),
    #[error("has lineality")]
    HasLineality,
    #[error("not full-dimensional")]
    NotFullDimensional,
    #[error("stencil outside domain")]
    StencilOutsideDomain,
    #[error("nondifferentiable point")]
    Nondifferentiable,
    #[error("no usable samples")]
    NoUsableSamples,
    #[error("empty slice")]
    EmptySlice,
    #[error("no epigraph points in box")]
    NoEpigraphPoints,
    #[error("point outside domain")]
    OutsideDomain,
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
