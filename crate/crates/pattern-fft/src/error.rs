use thiserror::Error;

/// Errors shared by all transform and lattice operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The matrix has determinant zero and generates no finite pattern.
    #[error("matrix is singular")]
    SingularMatrix,
    /// The point is not on the lattice of the given matrix (M·x is not integral).
    #[error("point is not on the lattice")]
    NotInLattice,
    /// The point cannot be addressed by the pattern basis.
    #[error("point is not in the pattern")]
    NotInPattern,
    /// A claimed factorization M = J·N does not hold.
    #[error("J·N does not equal M")]
    BadFactorization,
    /// 𝒫(N) is not contained in 𝒫(M), i.e. M·N⁻¹ is not integral.
    #[error("pattern of N is not a subpattern of M")]
    NotASubpattern,
    /// The operation is only defined for matrices with a single cycle (d_J = 1).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Dense-matrix construction was requested beyond the configured limit.
    #[error("pattern size {m} exceeds the dense limit {limit}")]
    TooLarge { m: usize, limit: usize },
    /// An array does not match the shape the operation expects.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    /// The kernel has a vanishing symbol and the change of basis is not invertible.
    #[error("kernel symbol vanishes on a frequency class")]
    NonInvertibleKernel,
    /// The first d direction vectors of a box spline are linearly dependent.
    #[error("degenerate box-spline directions")]
    DegenerateDirections,
    /// Malformed matrix or array input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
