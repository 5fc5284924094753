//! Storage formats and dense/sparse kernels used by the eigensolver.
//!
//! Everything is column-major and 64-bit. The shifted systems `zB - A` are
//! always complex; the operators themselves are generic over [`Scalar`].
//!
//! [`Scalar`]: crate::Scalar

mod banded;
mod cholesky;
mod dense;
mod iterative;
mod jacobi;
mod lu;
mod operator;
mod residual;
mod solver;
mod sparse;

pub use banded::BandMatrix;
pub use cholesky::{cholesky, solve_lower, solve_lower_adjoint};
pub use dense::DenseBlock;
pub use iterative::{gmres, GmresOutcome};
pub use jacobi::{jacobi_eigen, reduced_gevp, ReducedEigen, SymmetricEigen, MAX_REDUCED_DIM};
pub use lu::{band_lu_factor, lu_factor, lu_solve, LuFactor, SolveMode};
pub use operator::{assemble_shifted, assemble_shifted_banded, Storage, SymmetricOperator};
pub use residual::{residual_norms, ResidualNorms, DEGENERATE_DENOMINATOR};
pub use solver::{DirectSolver, GmresSolver, InnerSolver, ShiftedStorage, ShiftedSystem};
pub use sparse::{CsrMatrix, TripletBuilder};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("entry ({row}, {col}) breaks symmetry")]
    NotSymmetric { row: usize, col: usize },
    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),
    #[error("matrix is numerically singular (pivot {index} has magnitude {magnitude:e})")]
    Singular { index: usize, magnitude: f64 },
    #[error("matrix is not positive definite (pivot {index} is {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("reduced problem of size {dim} exceeds the dense eigensolver limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("subspace breakdown: {0}")]
    SubspaceBreakdown(String),
}
