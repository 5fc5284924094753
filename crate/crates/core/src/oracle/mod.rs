//! Slow, independent reference computations for tests and experiments.
//!
//! Nothing here is used by the solver. The dense eigensolver is a
//! Cholesky reduction followed by Householder tridiagonalization and
//! implicit QL; the projector uses plain Gaussian elimination on each
//! shifted matrix. Only the quadrature nodes are shared with the solver.

mod eigen;
mod projector;

pub use eigen::{reference_eigenvalues, reference_gevp, OracleSpectrum};
pub use projector::{apply_numeric_projector, scalar_filter};
