use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not self-adjoint w.r.t. the given weights (relative symmetry residual {residual:.3e} > {tolerance:.1e})")]
    NotSelfAdjoint { residual: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("boundary map is not surjective (rank {rank} < boundary dimension {expected})")]
    GammaNotSurjective { rank: usize, expected: usize },

    #[error("linear system is numerically singular (condition estimate {cond_estimate:.3e} > 1e14)")]
    Singular { cond_estimate: f64 },

    #[error("z = {z} is within the pole-exclusion radius {delta:.1e} of the Dirichlet spectrum (distance {dist:.3e})")]
    TooCloseToDirichletSpectrum { z: Complex64, dist: f64, delta: f64 },

    #[error("z = {z} is within the pole-exclusion radius {delta:.1e} of the Neumann spectrum (distance {dist:.3e})")]
    TooCloseToNeumannSpectrum { z: Complex64, dist: f64, delta: f64 },

    #[error("pair has no boundary-first block structure (gamma must be [I | 0] with matching boundary weights)")]
    NotBlockStructured,

    #[error("Robin parameter must be non-negative, got {0}")]
    NegativeRobinParameter(f64),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("sum of the two Neumann-to-Dirichlet maps is numerically singular at z = {z}")]
    SingularSum { z: Complex64 },

    #[error("window [{lo}, {hi}] lies entirely inside an excised Dirichlet tube")]
    WindowInsideDirichletPoint { lo: f64, hi: f64 },

    #[error("lambda = {lambda} is not an isolated spectral hit: {reason}")]
    NotAnIsolatedHit { lambda: f64, reason: String },

    #[error("probe ring of radius {radius:.3e} around {lambda} touches the excised Dirichlet set")]
    RingTouchesDirichlet { lambda: f64, radius: f64 },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
