use super::{DenseBlock, LinalgError};
use crate::Scalar;

/// Lower-triangular `L` with `L L^H = M`. Only the lower triangle of `m` is
/// read. Fails when a pivot is not strictly positive.
pub fn cholesky<T: Scalar>(m: &DenseBlock<T>) -> Result<DenseBlock<T>, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut l = DenseBlock::<T>::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re();
        for k in 0..j {
            d -= l[(j, k)].modulus_sqr();
        }
        // NaN must fail too
        if !(d > 0.0) {
            return Err(LinalgError::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = T::from_real(ljj);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s.scale(1.0 / ljj);
        }
    }
    Ok(l)
}

/// `L^{-1} B` for lower-triangular `L`.
pub fn solve_lower<T: Scalar>(l: &DenseBlock<T>, b: &DenseBlock<T>) -> DenseBlock<T> {
    let n = l.rows();
    assert_eq!(b.rows(), n);
    let mut x = b.clone();
    for c in 0..x.cols() {
        let col = x.col_mut(c);
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= l[(i, k)] * col[k];
            }
            col[i] = s / l[(i, i)];
        }
    }
    x
}

/// `L^{-H} B` for lower-triangular `L`.
pub fn solve_lower_adjoint<T: Scalar>(l: &DenseBlock<T>, b: &DenseBlock<T>) -> DenseBlock<T> {
    let n = l.rows();
    assert_eq!(b.rows(), n);
    let mut x = b.clone();
    for c in 0..x.cols() {
        let col = x.col_mut(c);
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * col[k];
            }
            col[i] = s / l[(i, i)].conj();
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_factor() {
        let l = cholesky(&DenseBlock::<f64>::identity(3)).unwrap();
        assert_eq!(l, DenseBlock::identity(3));
    }

    #[test]
    fn two_by_two() {
        let m = DenseBlock::from_row_major(2, 2, &[4.0, 2.0, 2.0, 5.0]).unwrap();
        let l = cholesky(&m).unwrap();
        let expected = DenseBlock::from_row_major(2, 2, &[2.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(l, expected);
    }

    #[test]
    fn indefinite_rejected() {
        let m = DenseBlock::from_row_major(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        match cholesky(&m) {
            Err(LinalgError::NotPositiveDefinite { index, pivot }) => {
                assert_eq!(index, 1);
                assert_eq!(pivot, -3.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn hermitian_factor_and_triangular_solves() {
        let c = Complex64::new;
        let m = DenseBlock::from_row_major(
            3,
            3,
            &[
                c(4.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(0.2, 0.0),
                c(0.0, 0.5),
                c(0.2, 0.0),
                c(2.0, 0.0),
            ],
        )
        .unwrap();
        let l = cholesky(&m).unwrap();
        assert!(l.matmul(&l.adjoint()).max_abs_diff(&m) < 1e-14);
        let b = DenseBlock::from_fn(3, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let x = solve_lower(&l, &b);
        assert!(l.matmul(&x).max_abs_diff(&b) < 1e-14);
        let y = solve_lower_adjoint(&l, &b);
        assert!(l.adjoint().matmul(&y).max_abs_diff(&b) < 1e-14);
    }
}
