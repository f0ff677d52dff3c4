use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not hyperbolic: |trace| = {trace} <= 2")]
    NotHyperbolic { trace: i64 },

    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: i64 },

    #[error("radius {0} outside (0, 1/2)")]
    InvalidRadius(f64),

    #[error("dimension must be positive, got {0}")]
    NonPositiveN(i64),

    #[error("dimension {0} is odd; metaplectic quantization needs even N")]
    OddDimension(usize),

    #[error("grid {grid} too coarse for truncation {k_max} (need grid >= 4 * k_max)")]
    GridTooCoarse { grid: usize, k_max: usize },

    #[error("invalid cutoff: {0}")]
    InvalidSpec(String),

    #[error("leading eigenvalue modulus {0:e} too small to fix a phase")]
    DegeneratePhase(f64),

    #[error("composed mode ({k}, {l}) exceeds truncation {k_max}")]
    TruncationOverflow { k: i64, l: i64, k_max: usize },

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("Durand-Kerner iteration did not converge after {0} sweeps")]
    OracleNoConvergence(usize),

    #[error("matrix of dimension {0} exceeds the oracle limit of 8")]
    OracleTooLarge(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
