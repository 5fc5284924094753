use thiserror::Error;

use crate::linalg::{LinalgError, MAX_REDUCED_DIM};
use crate::quadrature::{QuadratureError, MAX_POINTS};
use crate::SymmetryClass;

pub const DEFAULT_N_E: usize = 8;
pub const DEFAULT_TRACE_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_LOOPS: usize = 20;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SPURIOUS_TOL: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeastError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("could not start worker threads: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeastConfig {
    /// Subspace size `M0`; must exceed the number of eigenvalues in the
    /// interval.
    pub m0: usize,
    /// Contour points.
    pub n_e: usize,
    /// Relative tolerance on the in-interval trace between loops.
    pub trace_tol: f64,
    pub max_loops: usize,
    /// Seed of the random initial block.
    pub seed: u64,
    pub class: SymmetryClass,
    /// Worker threads for the contour-point solves. Results do not depend
    /// on this value.
    pub threads: usize,
    /// Keep all contour-point factorizations across loops. When `false`
    /// they are rebuilt every loop.
    pub cache_factorizations: bool,
    /// In-interval Ritz pairs with `|A x - theta B x|_1 > spurious_tol * r
    /// |B x|_1`, `r` the interval radius, are treated as spurious: left out
    /// of the trace, the count and the result. `f64::INFINITY` keeps every
    /// in-interval pair.
    pub spurious_tol: f64,
}

impl FeastConfig {
    pub fn new(m0: usize) -> Self {
        Self {
            m0,
            n_e: DEFAULT_N_E,
            trace_tol: DEFAULT_TRACE_TOL,
            max_loops: DEFAULT_MAX_LOOPS,
            seed: DEFAULT_SEED,
            class: SymmetryClass::RealSymmetric,
            threads: 1,
            cache_factorizations: true,
            spurious_tol: DEFAULT_SPURIOUS_TOL,
        }
    }

    pub fn hermitian(m0: usize) -> Self {
        Self {
            class: SymmetryClass::Hermitian,
            ..Self::new(m0)
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), FeastError> {
        let fail = |msg: String| Err(FeastError::InvalidConfig(msg));
        if self.m0 == 0 {
            return fail("m0 must be at least 1".into());
        }
        if self.m0 > n {
            return fail(format!("m0 = {} exceeds the problem size {n}", self.m0));
        }
        if self.m0 > MAX_REDUCED_DIM {
            return fail(format!(
                "m0 = {} exceeds the reduced-solver limit {MAX_REDUCED_DIM}",
                self.m0
            ));
        }
        if self.n_e == 0 || self.n_e > MAX_POINTS {
            return fail(format!("n_e must be in 1..={MAX_POINTS}, got {}", self.n_e));
        }
        if !(self.trace_tol > 0.0 && self.trace_tol.is_finite()) {
            return fail(format!("trace_tol must be positive, got {}", self.trace_tol));
        }
        if !(self.spurious_tol > 0.0) {
            return fail(format!("spurious_tol must be positive, got {}", self.spurious_tol));
        }
        if self.max_loops == 0 {
            return fail("max_loops must be at least 1".into());
        }
        if self.threads == 0 {
            return fail("threads must be at least 1".into());
        }
        Ok(())
    }
}
