use thiserror::Error;

/// Errors raised by the algebra, field and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("half-dimension m = {0} is outside the supported range 1..=4")]
    HalfDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {grade} out of range 0..={max}")]
    GradeOutOfRange { grade: usize, max: usize },
    #[error("invalid bigrade ({p}, {q}) for m = {m}")]
    InvalidBigrade { p: usize, q: usize, m: usize },
    #[error("invalid complex structure: {0}")]
    ComplexStructure(String),
    #[error("type index r = {r} out of range 0..={m}")]
    TypeIndex { r: usize, m: usize },
    #[error("spectrum calibration failed: {0}")]
    Calibration(String),
    #[error("no pairing realizes involution {0}")]
    NoPairing(String),
    #[error("spinor is not of pure type {r}: component outside the range of projector {r} has size {residual:e}")]
    TypeImpurity { r: usize, residual: f64 },
    #[error("input is not homogeneous of grade {0}")]
    Inhomogeneous(usize),
    #[error("input is not of pure bigrade ({p}, {q})")]
    ImpureBigrade { p: usize, q: usize },
    #[error("variant precondition violated: {0}")]
    Variant(String),
    #[error("dimension bound violated: dim = {dim} > {bound}")]
    DimensionBound { dim: usize, bound: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed serialized section: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
