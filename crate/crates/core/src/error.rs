use thiserror::Error;

/// Errors raised by the lattice, continuum, spectral and gauge routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid transition rates: {0}")]
    InvalidRates(String),

    #[error("field has {found} sites but the lattice has {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("imaginary step weights require a complex field")]
    RealFieldImaginaryWeight,

    #[error("simple master equation needs equal reversal rates, got {plus} and {minus}")]
    AsymmetricRates { plus: f64, minus: f64 },

    #[error("path enumeration is limited to n <= {max}, got {n}")]
    EnumerationBound { n: u32, max: u32 },

    #[error("singular per-site system (determinant {det:e})")]
    SingularSite { det: f64 },

    #[error("time indices {first} and {second} are not adjacent")]
    NonAdjacentTimes { first: i64, second: i64 },

    #[error("need at least {needed} time slices, got {found}")]
    TooFewSlices { needed: usize, found: usize },

    #[error("invalid residual ladder: {0}")]
    InvalidLadder(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operation needs a one-dimensional momentum (p_x = p_y = 0)")]
    NotOneDimensional,

    #[error("sampled potentials are only supported by the position-space residual")]
    SampledPotential,
}

pub type Result<T> = std::result::Result<T, Error>;
