use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::FeastError;
use crate::linalg::{DenseBlock, InnerSolver, LinalgError, ShiftedSystem, SolveMode, SymmetricOperator};
use crate::quadrature::{Contour, ContourPoint};
use crate::Scalar;

/// The `N x M0` block produced by one quadrature pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    pub q: DenseBlock<T>,
}

/// Shifted systems prepared at every point of a contour, in node order.
pub struct ContourSystems<'a> {
    systems: Vec<Box<dyn ShiftedSystem + 'a>>,
}

impl<'a> ContourSystems<'a> {
    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }
}

/// Prepares (factorizes) `z_e B - A` for all contour points in parallel on
/// the current rayon pool.
pub fn prepare_contour<'a, T: Scalar, S: InnerSolver<T> + ?Sized>(
    solver: &S,
    a: &'a SymmetricOperator<T>,
    b: &'a SymmetricOperator<T>,
    contour: &Contour,
) -> Result<ContourSystems<'a>, LinalgError> {
    let systems = contour
        .points
        .par_iter()
        .map(|p| solver.prepare(a, b, p.z))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ContourSystems { systems })
}

/// Scalar types with a quadrature rule for the subspace accumulation and a
/// way to draw random entries.
pub trait FeastScalar: Scalar {
    /// One contour point's contribution to `Q`.
    fn contour_term(
        system: &dyn ShiftedSystem,
        point: &ContourPoint,
        radius: f64,
        y: &DenseBlock<Complex64>,
    ) -> Result<DenseBlock<Self>, LinalgError>;

    /// Maps uniform draws in `[-1, 1)` to a scalar.
    fn draw(next: &mut impl FnMut() -> f64) -> Self;
}

impl FeastScalar for f64 {
    /// `-(w_e / 2) Re{ r e^{i theta_e} (z_e B - A)^{-1} Y }`
    fn contour_term(
        system: &dyn ShiftedSystem,
        point: &ContourPoint,
        radius: f64,
        y: &DenseBlock<Complex64>,
    ) -> Result<DenseBlock<f64>, LinalgError> {
        let qe = system.solve(y, SolveMode::Normal)?;
        let factor = Complex64::from_polar(radius, point.theta);
        let half_w = point.weight / 2.0;
        Ok(qe.map(|v| -half_w * (factor * v).re))
    }

    fn draw(next: &mut impl FnMut() -> f64) -> f64 {
        next()
    }
}

impl FeastScalar for Complex64 {
    /// `-(w_e r / 4) (e^{i theta_e} G(z_e) + e^{-i theta_e} G(z_e)^H) Y`
    fn contour_term(
        system: &dyn ShiftedSystem,
        point: &ContourPoint,
        radius: f64,
        y: &DenseBlock<Complex64>,
    ) -> Result<DenseBlock<Complex64>, LinalgError> {
        let g = system.solve(y, SolveMode::Normal)?;
        let g_adj = system.solve(y, SolveMode::ConjugateTranspose)?;
        let phase = Complex64::from_polar(1.0, point.theta);
        let c = -point.weight * radius / 4.0;
        let mut out = g.map(|v| v * phase);
        out.add_scaled(&g_adj, phase.conj());
        Ok(out.map(|v| v * c))
    }

    fn draw(next: &mut impl FnMut() -> f64) -> Complex64 {
        let re = next();
        let im = next();
        Complex64::new(re, im)
    }
}

/// Sums the contour terms. The solves run in parallel; the sum is formed in
/// ascending node order so the result does not depend on scheduling.
pub(crate) fn accumulate_with<T: FeastScalar>(
    systems: &ContourSystems<'_>,
    y: &DenseBlock<T>,
    contour: &Contour,
) -> Result<DenseBlock<T>, LinalgError> {
    assert_eq!(systems.len(), contour.len());
    let yc = y.to_complex();
    let terms = systems
        .systems
        .par_iter()
        .zip(contour.points.par_iter())
        .map(|(sys, p)| T::contour_term(sys.as_ref(), p, contour.radius, &yc))
        .collect::<Result<Vec<_>, _>>()?;
    let mut q = DenseBlock::zeros(y.rows(), y.cols());
    for t in &terms {
        q.add_scaled(t, T::one());
    }
    Ok(q)
}

fn check_block<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    y: &DenseBlock<T>,
) -> Result<(), LinalgError> {
    if a.n() != b.n() {
        return Err(LinalgError::DimensionMismatch {
            what: "operator order",
            expected: a.n(),
            got: b.n(),
        });
    }
    if y.rows() != a.n() {
        return Err(LinalgError::DimensionMismatch {
            what: "block rows",
            expected: a.n(),
            got: y.rows(),
        });
    }
    Ok(())
}

/// Quadrature approximation of the spectral projector applied to a real
/// block `Y`, for a real-symmetric pencil.
pub fn accumulate_subspace_real<S: InnerSolver<f64> + ?Sized>(
    a: &SymmetricOperator<f64>,
    b: &SymmetricOperator<f64>,
    y: &DenseBlock<f64>,
    contour: &Contour,
    solver: &S,
) -> Result<Subspace<f64>, FeastError> {
    check_block(a, b, y)?;
    let systems = prepare_contour(solver, a, b, contour)?;
    Ok(Subspace {
        q: accumulate_with(&systems, y, contour)?,
    })
}

/// Hermitian counterpart of [`accumulate_subspace_real`]; the adjoint solve
/// reuses the factorization of `z_e B - A`.
pub fn accumulate_subspace_hermitian<S: InnerSolver<Complex64> + ?Sized>(
    a: &SymmetricOperator<Complex64>,
    b: &SymmetricOperator<Complex64>,
    y: &DenseBlock<Complex64>,
    contour: &Contour,
    solver: &S,
) -> Result<Subspace<Complex64>, FeastError> {
    check_block(a, b, y)?;
    let systems = prepare_contour(solver, a, b, contour)?;
    Ok(Subspace {
        q: accumulate_with(&systems, y, contour)?,
    })
}

/// Seeded `n x m0` block with entries uniform in `[-1, 1)`.
///
/// The generator is ChaCha8 seeded through `seed_from_u64`; each draw takes
/// the top 53 bits of one `next_u64` as `u` in `[0, 1)` and returns
/// `2u - 1`. Entries are filled column by column; complex entries draw the
/// real part first, then the imaginary part.
pub fn random_block<T: FeastScalar>(n: usize, m0: usize, seed: u64) -> Result<DenseBlock<T>, FeastError> {
    if m0 > n {
        return Err(FeastError::InvalidConfig(format!(
            "random block needs m0 <= n (m0 = {m0}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = || {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    };
    Ok(DenseBlock::from_fn(n, m0, |_, _| T::draw(&mut next)))
}
