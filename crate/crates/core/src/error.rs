use thiserror::Error;

/// Which of the two defining equations of a norm-preserving map failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomEquation {
    /// `t' = u t + 2c`
    Trace,
    /// `n' = u^2 n + u c t + c^2`
    Norm,
}

impl std::fmt::Display for HomEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomEquation::Trace => f.write_str("t' = u*t + 2*c"),
            HomEquation::Norm => f.write_str("n' = u^2*n + u*c*t + c^2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different rings")]
    MixedRings,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` was not assigned a value")]
    UnassignedVariable(String),
    #[error("variable `{0}` is already in use")]
    VariableInUse(String),
    #[error("polynomial is not divisible by `{0}`")]
    NotDivisible(String),
    #[error("localization is not supported: {0}")]
    LocalizationUnsupported(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("partition sums to {got}, expected rank {rank}")]
    PartitionMismatch { got: usize, rank: usize },
    #[error("ring homomorphism does not match: {0}")]
    HomMismatch(String),
    #[error("algebras do not form a tower: {0}")]
    TowerMismatch(String),
    #[error("map is not norm-preserving: {0} fails")]
    NotNormPreserving(HomEquation),
    #[error("homomorphisms cannot be composed: target of the first is not the source of the second")]
    ChainMismatch,
    #[error("no isomorphism exists")]
    NotFound,
    #[error("ring is not finite, exhaustive search is impossible")]
    InfiniteRing,
    #[error("quadratic algebra is not over the extension ring")]
    BaseMismatch,
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("descent datum is inconsistent: {0}")]
    CocycleViolation(String),
    #[error("no global generator found within the search bound")]
    NotGlobalizable,
    #[error("unsupported base ring: {0}")]
    UnsupportedBase(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("random generation gave up after {0} rejected samples")]
    GenerationExhausted(usize),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MixedRings => "MixedRings",
            Error::NotAUnit => "NotAUnit",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::UnassignedVariable(_) => "UnassignedVariable",
            Error::VariableInUse(_) => "VariableInUse",
            Error::NotDivisible(_) => "NotDivisible",
            Error::LocalizationUnsupported(_) => "LocalizationUnsupported",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare(..) => "NotSquare",
            Error::MixedAlgebras => "MixedAlgebras",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::PartitionMismatch { .. } => "PartitionMismatch",
            Error::HomMismatch(_) => "HomMismatch",
            Error::TowerMismatch(_) => "TowerMismatch",
            Error::NotNormPreserving(_) => "NotNormPreserving",
            Error::ChainMismatch => "ChainMismatch",
            Error::NotFound => "NotFound",
            Error::InfiniteRing => "InfiniteRing",
            Error::BaseMismatch => "BaseMismatch",
            Error::InternalContradiction(_) => "InternalContradiction",
            Error::CocycleViolation(_) => "CocycleViolation",
            Error::NotGlobalizable => "NotGlobalizable",
            Error::UnsupportedBase(_) => "UnsupportedBase",
            Error::InvalidRing(_) => "InvalidRing",
            Error::Parse(_) => "Parse",
            Error::GenerationExhausted(_) => "GenerationExhausted",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
