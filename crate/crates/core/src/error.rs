//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LgkError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LgkError {
    #[error("invalid region: lo {lo:?} exceeds hi {hi:?}")]
    InvalidRegion { lo: [i64; 3], hi: [i64; 3] },
    #[error("invalid nesting: {0}")]
    InvalidNesting(String),
    #[error("site {0:?} is not in the lattice")]
    SiteNotInGraph([i64; 3]),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("Lie index {index} out of range for a Lie basis of size {size}")]
    InvalidLieIndex { index: usize, size: usize },
    #[error("group {0} has no Lie algebra")]
    NoLieAlgebra(String),
    #[error("sub-cutoff {sub} exceeds cutoff {cutoff}")]
    InvalidCutoff { sub: u32, cutoff: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires matter fields but matter is disabled")]
    MatterAbsent,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("operator is not hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("Lanczos did not converge; best residual {best_residual:e}")]
    NotConverged { best_residual: f64 },
    #[error("second-class constraints: the Dirac subspace is zero")]
    SecondClass,
    #[error("constraint unitary {index} lies outside the algebra (residual {residual:e})")]
    ConstraintOutsideAlgebra { index: usize, residual: f64 },
    #[error("matrix {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error("size limit exceeded: {0}")]
    CapExceeded(String),
    #[error("operator is not homogeneous for the weight grading")]
    NotHomogeneous,
    #[error("algebras are not nested: {0}")]
    NotNested(String),
}
