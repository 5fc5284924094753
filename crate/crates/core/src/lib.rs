//! Contour-integration eigensolver for `A x = lambda B x` with Hermitian `A`
//! and Hermitian positive definite `B`, restricted to a search interval.
//!
//! ```
//! use feast_core::feast::{feast_solve, FeastConfig, FeastStatus};
//! use feast_core::linalg::SymmetricOperator;
//! use feast_core::quadrature::SearchInterval;
//!
//! let a = SymmetricOperator::<f64>::diagonal(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
//! let b = SymmetricOperator::identity(8);
//! let interval = SearchInterval::new(2.5, 5.5).unwrap();
//! let out = feast_solve(&a, &b, interval, &FeastConfig::new(5), None).unwrap();
//! assert_eq!(out.status, FeastStatus::Converged);
//! assert_eq!(out.lambdas.len(), 3);
//! ```

pub mod feast;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
mod scalar;

pub use feast::{feast_solve, feast_solve_with, FeastConfig, FeastError, FeastResult, FeastStatus};
pub use scalar::{Scalar, SymmetryClass};
