//! Dense Hermitian eigensolver (cyclic Jacobi) and the reduced
//! symmetric-definite problem `A_Q phi = eps B_Q phi`.

use super::{cholesky, solve_lower, solve_lower_adjoint, DenseBlock, LinalgError};
use crate::Scalar;

/// Largest reduced problem handed to the Jacobi solver.
pub const MAX_REDUCED_DIM: usize = 128;

/// Eigenvalues of `B_Q` at or below this fraction of the largest one are
/// dropped when `B_Q` is not safely positive definite.
pub const TRUNCATION_RTOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal columns matching `values`.
    pub vectors: DenseBlock<T>,
}

/// Cyclic-by-row Jacobi diagonalization of a Hermitian matrix. Only the
/// Hermitian part of `m` is used. Eigenvalues are sorted ascending with a
/// stable sort.
pub fn jacobi_eigen<T: Scalar>(m: &DenseBlock<T>) -> SymmetricEigen<T> {
    assert_eq!(m.rows(), m.cols(), "jacobi_eigen needs a square matrix");
    let n = m.rows();
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = T::from_real(a[(i, i)].re());
    }
    let mut v = DenseBlock::<T>::identity(n);
    let scale = a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.modulus();
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                let floor = (app * aqq).abs().sqrt().max(f64::EPSILON * scale);
                if mag <= f64::EPSILON * floor {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let u = apq.scale(1.0 / mag);
                let su = u.scale(s);
                let su_bar = su.conj();
                // A <- A J, columns p and q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - su_bar * akq;
                    a[(k, q)] = su * akp + akq.scale(c);
                }
                // A <- J^H A, rows p and q
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) - su * aqk;
                    a[(q, k)] = su_bar * apk + aqk.scale(c);
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                a[(p, p)] = T::from_real(a[(p, p)].re());
                a[(q, q)] = T::from_real(a[(q, q)].re());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) - su_bar * vkq;
                    v[(k, q)] = su * vkp + vkq.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    SymmetricEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.select_columns(&order),
    }
}

#[derive(Clone, Debug)]
pub struct ReducedEigen<T> {
    /// Ascending.
    pub values: Vec<f64>,
    /// `M0 x k` block of `B_Q`-orthonormal eigenvectors.
    pub vectors: DenseBlock<T>,
    /// `true` when `B_Q` had to be truncated to its dominant eigenspace; the
    /// output then has fewer columns than `B_Q` has rows.
    pub truncated: bool,
}

/// Solves `A_Q phi = eps B_Q phi` for Hermitian `A_Q` and Hermitian
/// positive (semi)definite `B_Q`.
///
/// The default route is a Cholesky reduction to a standard problem. If a
/// Cholesky pivot falls below `TRUNCATION_RTOL * max diag(B_Q)` the pencil
/// is instead projected onto the eigenvectors of `B_Q` whose eigenvalues
/// exceed `TRUNCATION_RTOL * max eig(B_Q)`.
pub fn reduced_gevp<T: Scalar>(a_q: &DenseBlock<T>, b_q: &DenseBlock<T>) -> Result<ReducedEigen<T>, LinalgError> {
    let m = a_q.rows();
    if a_q.cols() != m {
        return Err(LinalgError::NotSquare {
            rows: m,
            cols: a_q.cols(),
        });
    }
    if b_q.rows() != m || b_q.cols() != m {
        return Err(LinalgError::DimensionMismatch {
            what: "B_Q order",
            expected: m,
            got: b_q.rows(),
        });
    }
    if m > MAX_REDUCED_DIM {
        return Err(LinalgError::TooLarge {
            dim: m,
            limit: MAX_REDUCED_DIM,
        });
    }
    if !a_q.is_finite() || !b_q.is_finite() {
        return Err(LinalgError::SubspaceBreakdown(
            "non-finite entries in the reduced matrices".into(),
        ));
    }
    let a_q = a_q.hermitian_part();
    let b_q = b_q.hermitian_part();
    let max_diag = (0..m).map(|i| b_q[(i, i)].re()).fold(0.0, f64::max);
    if let Ok(l) = cholesky(&b_q) {
        let min_pivot = (0..m).map(|i| l[(i, i)].re().powi(2)).fold(f64::INFINITY, f64::min);
        if min_pivot > TRUNCATION_RTOL * max_diag {
            // C = L^{-1} A_Q L^{-H}
            let left = solve_lower(&l, &a_q);
            let c = solve_lower(&l, &left.adjoint());
            let eig = jacobi_eigen(&c);
            let vectors = solve_lower_adjoint(&l, &eig.vectors);
            return Ok(ReducedEigen {
                values: eig.values,
                vectors,
                truncated: false,
            });
        }
    }

    let b_eig = jacobi_eigen(&b_q);
    let s_max = b_eig.values.last().copied().unwrap_or(0.0);
    if !(s_max > 0.0) {
        return Err(LinalgError::SubspaceBreakdown("B_Q has no positive eigenvalues".into()));
    }
    let keep: Vec<usize> = (0..m).filter(|&i| b_eig.values[i] > TRUNCATION_RTOL * s_max).collect();
    let mut w = b_eig.vectors.select_columns(&keep);
    let inv_sqrt: Vec<f64> = keep.iter().map(|&i| 1.0 / b_eig.values[i].sqrt()).collect();
    w.scale_columns(&inv_sqrt);
    let c = w.adjoint_matmul(&a_q.matmul(&w));
    let eig = jacobi_eigen(&c);
    Ok(ReducedEigen {
        values: eig.values,
        vectors: w.matmul(&eig.vectors),
        truncated: true,
    })
}
