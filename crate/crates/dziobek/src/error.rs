//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometry, coordinate, and solver operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two particles closer than the coincidence threshold.
    #[error("particles {i} and {j} coincide (squared distance {s:.3e} below epsilon {eps:.3e})")]
    CoincidentPoints { i: usize, j: usize, s: f64, eps: f64 },

    /// Inputs whose shapes or dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A squared-distance matrix that cannot be realized in the requested dimension.
    ///
    /// `most_negative` is the most negative Gram eigenvalue (0 if none);
    /// `excess_rank` counts significant eigenvalues beyond the target dimension.
    #[error(
        "distance matrix not realizable in dimension {dim}: most negative Gram eigenvalue {most_negative:.3e}, excess rank {excess_rank}"
    )]
    NotRealizable {
        dim: usize,
        most_negative: f64,
        excess_rank: usize,
    },

    /// The homogeneous barycentric system has a solution space of dimension != 1.
    #[error("barycentric coordinate ray is not unique: null space dimension {nullity}")]
    WrongRank { nullity: usize },

    /// A pair product outside the open domain of the coordinate-to-distance map.
    #[error("domain violation: delta_{i} * delta_{j} = {product:.6e} >= m_{i} * m_{j} = {bound:.6e}")]
    DomainViolation {
        i: usize,
        j: usize,
        product: f64,
        bound: f64,
    },

    /// An inequality-suite input that fails its stated hypotheses.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// All solver starts failed to reach the residual tolerance.
    #[error("no convergence: best residual {best_residual:.3e} after {starts} starts")]
    NoConvergence { best_residual: f64, starts: usize },

    /// Roots of the coordinate system were found but all failed post-validation.
    #[error("{count} root(s) solved the coordinate system but failed realizability validation")]
    SpuriousOnly { count: usize },

    /// Invalid user-supplied input (masses, exponent, sign pattern, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
