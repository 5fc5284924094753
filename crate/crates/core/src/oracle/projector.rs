use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::linalg::{DenseBlock, LinalgError, SymmetricOperator};
use crate::quadrature::{gauss_legendre, QuadratureError, SearchInterval};
use crate::Scalar;

/// Largest order accepted by [`apply_numeric_projector`].
pub const MAX_PROJECTOR_DIM: usize = 200;

/// `(theta_e, weight_e)` for each node of the rule.
fn angles(n_e: usize) -> Result<Vec<(f64, f64)>, QuadratureError> {
    let rule = gauss_legendre(n_e)?;
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| (-FRAC_PI_2 * (x - 1.0), w))
        .collect())
}

/// Value of the discretized filter on an eigendirection with eigenvalue
/// `lambda`. It is `-1` at the interval center.
pub fn scalar_filter(lambda: f64, interval: &SearchInterval, n_e: usize) -> Result<f64, QuadratureError> {
    let c = interval.center();
    let r = interval.radius();
    let mut f = 0.0;
    for (theta, w) in angles(n_e)? {
        let e = Complex64::new(theta.cos(), theta.sin());
        let z = Complex64::new(c, 0.0) + e * r;
        f -= 0.5 * w * (e * r / (z - lambda)).re;
    }
    Ok(f)
}

/// Quadrature approximation of the spectral projector applied to `v`,
/// with every shifted system solved by dense Gaussian elimination.
///
/// Uses `-(w r / 4) (e^{i theta} G(z) + e^{-i theta} G(conj z)) V` per node,
/// which reduces to the real-symmetric formula for real data.
pub fn apply_numeric_projector<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    interval: &SearchInterval,
    n_e: usize,
    v: &DenseBlock<T>,
) -> Result<DenseBlock<T>, LinalgError> {
    let n = a.n();
    if b.n() != n || v.rows() != n {
        return Err(LinalgError::DimensionMismatch {
            what: "projector operand",
            expected: n,
            got: if b.n() != n { b.n() } else { v.rows() },
        });
    }
    if n > MAX_PROJECTOR_DIM {
        return Err(LinalgError::TooLarge {
            dim: n,
            limit: MAX_PROJECTOR_DIM,
        });
    }
    let nodes = angles(n_e).map_err(|e| LinalgError::InvalidStructure(e.to_string()))?;
    let (c, r) = (interval.center(), interval.radius());
    let ad = a.to_dense();
    let bd = b.to_dense();
    let vc: Vec<Vec<Complex64>> = (0..v.cols())
        .map(|j| v.col(j).iter().map(|x| x.to_c64()).collect())
        .collect();
    let mut acc = vec![vec![Complex64::new(0.0, 0.0); n]; v.cols()];
    for (theta, w) in nodes {
        let e = Complex64::new(theta.cos(), theta.sin());
        let z = Complex64::new(c, 0.0) + e * r;
        let scale = -w * r / 4.0;
        for (shift, factor) in [(z, e), (z.conj(), e.conj())] {
            let m: Vec<Vec<Complex64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| shift * bd[(i, j)].to_c64() - ad[(i, j)].to_c64())
                        .collect()
                })
                .collect();
            let sol = gauss_solve(m, &vc)?;
            for (acc_col, sol_col) in acc.iter_mut().zip(&sol) {
                for (s, x) in acc_col.iter_mut().zip(sol_col) {
                    *s += factor * x * scale;
                }
            }
        }
    }
    Ok(DenseBlock::from_fn(n, v.cols(), |i, j| T::from_c64(acc[j][i])))
}

/// Row-major Gaussian elimination with partial pivoting, several
/// right-hand sides.
fn gauss_solve(mut m: Vec<Vec<Complex64>>, rhs: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>, LinalgError> {
    let n = m.len();
    let k = rhs.len();
    // rows of [M | rhs]
    let mut b: Vec<Vec<Complex64>> = (0..n).map(|i| rhs.iter().map(|col| col[i]).collect()).collect();
    for p in 0..n {
        let piv = (p..n)
            .max_by(|&x, &y| m[x][p].norm().total_cmp(&m[y][p].norm()))
            .expect("non-empty range");
        if m[piv][p].norm() == 0.0 {
            return Err(LinalgError::Singular {
                index: p,
                magnitude: 0.0,
            });
        }
        m.swap(p, piv);
        b.swap(p, piv);
        let d = m[p][p];
        for i in p + 1..n {
            let l = m[i][p] / d;
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in p..n {
                let t = m[p][j];
                m[i][j] -= l * t;
            }
            for j in 0..k {
                let t = b[p][j];
                b[i][j] -= l * t;
            }
        }
    }
    let mut x = vec![vec![Complex64::new(0.0, 0.0); n]; k];
    for i in (0..n).rev() {
        for j in 0..k {
            let mut s = b[i][j];
            for q in i + 1..n {
                s -= m[i][q] * x[j][q];
            }
            x[j][i] = s / m[i][i];
        }
    }
    Ok(x)
}
