//! Pluggable inner solvers for the shifted systems `(z B - A) X = Y`.

use num_complex::Complex64;

use super::{
    assemble_shifted, assemble_shifted_banded, band_lu_factor, gmres, lu_factor, lu_solve, DenseBlock, LinalgError,
    LuFactor, SolveMode, SymmetricOperator,
};
use crate::Scalar;

/// A shifted system prepared at one contour point. Implementations must be
/// safe to share between threads.
pub trait ShiftedSystem: Send + Sync {
    fn solve(&self, rhs: &DenseBlock<Complex64>, mode: SolveMode) -> Result<DenseBlock<Complex64>, LinalgError>;
}

pub trait InnerSolver<T: Scalar>: Sync {
    /// Builds (and for direct solvers, factorizes) `z B - A`.
    fn prepare<'a>(
        &self,
        a: &'a SymmetricOperator<T>,
        b: &'a SymmetricOperator<T>,
        z: Complex64,
    ) -> Result<Box<dyn ShiftedSystem + 'a>, LinalgError>;

    /// Relative residual reached by each solve; `None` for exact solvers.
    fn tolerance(&self) -> Option<f64> {
        None
    }
}

impl ShiftedSystem for LuFactor {
    fn solve(&self, rhs: &DenseBlock<Complex64>, mode: SolveMode) -> Result<DenseBlock<Complex64>, LinalgError> {
        lu_solve(self, rhs, mode)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ShiftedStorage {
    /// Banded when both operators are sparse and the band is narrow,
    /// dense otherwise.
    #[default]
    Auto,
    Dense,
    Banded,
}

/// Dense or banded complex LU with partial pivoting.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectSolver {
    pub storage: ShiftedStorage,
}

impl DirectSolver {
    pub fn new(storage: ShiftedStorage) -> Self {
        Self { storage }
    }

    fn use_banded<T: Scalar>(&self, a: &SymmetricOperator<T>, b: &SymmetricOperator<T>) -> bool {
        match self.storage {
            ShiftedStorage::Dense => false,
            ShiftedStorage::Banded => true,
            ShiftedStorage::Auto => {
                if !(a.is_sparse() && b.is_sparse()) {
                    return false;
                }
                let n = a.n();
                let bw = a.bandwidth().max(b.bandwidth());
                // band factor costs about n * bw * 3 bw against n^3 / 3
                4 * (3 * bw + 1) < n
            }
        }
    }
}

impl<T: Scalar> InnerSolver<T> for DirectSolver {
    fn prepare<'a>(
        &self,
        a: &'a SymmetricOperator<T>,
        b: &'a SymmetricOperator<T>,
        z: Complex64,
    ) -> Result<Box<dyn ShiftedSystem + 'a>, LinalgError> {
        let factor = if self.use_banded(a, b) {
            band_lu_factor(assemble_shifted_banded(a, b, z)?)?
        } else {
            lu_factor(assemble_shifted(a, b, z)?)?
        };
        Ok(Box::new(factor))
    }
}

/// Unpreconditioned restarted GMRES at a fixed relative-residual target.
#[derive(Clone, Copy, Debug)]
pub struct GmresSolver {
    pub tolerance: f64,
    pub restart: usize,
    pub max_iters: usize,
}

impl GmresSolver {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            restart: 60,
            max_iters: 5000,
        }
    }
}

struct GmresSystem<'a, T> {
    a: &'a SymmetricOperator<T>,
    b: &'a SymmetricOperator<T>,
    z: Complex64,
    cfg: GmresSolver,
}

impl<T: Scalar> ShiftedSystem for GmresSystem<'_, T> {
    fn solve(&self, rhs: &DenseBlock<Complex64>, mode: SolveMode) -> Result<DenseBlock<Complex64>, LinalgError> {
        let n = self.a.n();
        if rhs.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                what: "right-hand side rows",
                expected: n,
                got: rhs.rows(),
            });
        }
        // (zB - A)^H = conj(z) B - A for Hermitian A, B
        let z = match mode {
            SolveMode::Normal => self.z,
            SolveMode::ConjugateTranspose => self.z.conj(),
        };
        let apply = |x: &[Complex64], y: &mut [Complex64]| {
            let mut ax = vec![Complex64::new(0.0, 0.0); n];
            self.b.apply_complex(x, y);
            self.a.apply_complex(x, &mut ax);
            for (yi, axi) in y.iter_mut().zip(&ax) {
                *yi = z * *yi - axi;
            }
        };
        let mut out = DenseBlock::zeros(n, rhs.cols());
        for j in 0..rhs.cols() {
            let res = gmres(
                apply,
                rhs.col(j),
                self.cfg.tolerance,
                self.cfg.restart,
                self.cfg.max_iters,
            );
            out.col_mut(j).copy_from_slice(&res.x);
        }
        Ok(out)
    }
}

impl<T: Scalar> InnerSolver<T> for GmresSolver {
    fn prepare<'a>(
        &self,
        a: &'a SymmetricOperator<T>,
        b: &'a SymmetricOperator<T>,
        z: Complex64,
    ) -> Result<Box<dyn ShiftedSystem + 'a>, LinalgError> {
        if a.n() != b.n() {
            return Err(LinalgError::DimensionMismatch {
                what: "operator order",
                expected: a.n(),
                got: b.n(),
            });
        }
        Ok(Box::new(GmresSystem { a, b, z, cfg: *self }))
    }

    fn tolerance(&self) -> Option<f64> {
        Some(self.tolerance)
    }
}
