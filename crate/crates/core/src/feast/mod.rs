//! The contour-integration eigensolver.
//!
//! One refinement loop:
//!
//! 1. solve `(z_e B - A) Q_e = Y` at every contour point (independent,
//!    run in parallel),
//! 2. accumulate the quadrature sum into `Q` in ascending node order,
//! 3. project: `A_Q = Q^H A Q`, `B_Q = Q^H B Q`, solve the reduced pencil,
//! 4. keep the Ritz pairs inside the interval whose residual passes the
//!    spurious gate and compare their trace with the previous loop,
//! 5. if not converged, restart from `Y = B X` with all Ritz vectors.
//!
//! The Ritz vectors come out `B`-orthonormal from the reduced solve; there
//! is no separate orthogonalization of `Q`.
//!
//! A Ritz vector that mixes eigenvectors from both sides of the interval can
//! have its Ritz value inside it. When the filter weights of the two sides
//! nearly tie, such a pair survives many loops and keeps the trace moving,
//! so pairs with a large residual are not counted.

mod config;
mod ritz;
mod solve;
mod subspace;

pub use config::{
    FeastConfig, FeastError, DEFAULT_MAX_LOOPS, DEFAULT_N_E, DEFAULT_SEED, DEFAULT_SPURIOUS_TOL, DEFAULT_TRACE_TOL,
};
pub use ritz::{rayleigh_ritz, trace_of_in_interval, RitzPairs};
pub use solve::{feast_solve, feast_solve_with, FeastResult, FeastStatus, Timings};
pub use subspace::{
    accumulate_subspace_hermitian, accumulate_subspace_real, prepare_contour, random_block, ContourSystems,
    FeastScalar, Subspace,
};
