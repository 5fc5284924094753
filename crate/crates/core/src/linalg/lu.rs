use num_complex::Complex64;

use super::banded::{self, BandMatrix};
use super::{DenseBlock, LinalgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Solve `M X = RHS`.
    Normal,
    /// Solve `M^H X = RHS`.
    ConjugateTranspose,
}

#[derive(Clone, Debug)]
enum Factored {
    Dense { lu: DenseBlock<Complex64>, piv: Vec<usize> },
    Banded { lu: BandMatrix, piv: Vec<usize> },
}

/// LU factorization with row pivoting of a square complex matrix, either
/// dense or banded. Immutable once built; solves allocate their own output
/// so one factor can serve concurrent callers.
#[derive(Clone, Debug)]
pub struct LuFactor {
    n: usize,
    inner: Factored,
}

impl LuFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_banded(&self) -> bool {
        matches!(self.inner, Factored::Banded { .. })
    }
}

/// Pivots at or below `n * eps * max|M|` are treated as exact zeros.
fn pivot_floor(n: usize, max_abs: f64) -> f64 {
    n as f64 * f64::EPSILON * max_abs
}

pub fn lu_factor(mut m: DenseBlock<Complex64>) -> Result<LuFactor, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    let floor = pivot_floor(n, m.max_abs());
    let mut piv = vec![0usize; n];
    let data = m.as_mut_slice();
    for k in 0..n {
        let col = &data[k * n..(k + 1) * n];
        let (p, best) = col[k..]
            .iter()
            .enumerate()
            .map(|(i, v)| (i + k, v.norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        piv[k] = p;
        if best <= floor {
            return Err(LinalgError::Singular {
                index: k,
                magnitude: best,
            });
        }
        if p != k {
            for j in 0..n {
                data.swap(p + j * n, k + j * n);
            }
        }
        let recip = Complex64::new(1.0, 0.0) / data[k + k * n];
        for v in &mut data[k * n + k + 1..(k + 1) * n] {
            *v *= recip;
        }
        let (left, right) = data.split_at_mut((k + 1) * n);
        let lcol = &left[k * n + k + 1..(k + 1) * n];
        for j in 0..n - k - 1 {
            let c = &mut right[j * n..(j + 1) * n];
            let ukj = c[k];
            if ukj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (dst, &l) in c[k + 1..].iter_mut().zip(lcol) {
                *dst -= l * ukj;
            }
        }
    }
    Ok(LuFactor {
        n,
        inner: Factored::Dense { lu: m, piv },
    })
}

pub fn band_lu_factor(mut m: BandMatrix) -> Result<LuFactor, LinalgError> {
    let n = m.n();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    let floor = pivot_floor(n, m.max_abs());
    let piv = banded::factor(&mut m, floor)?;
    Ok(LuFactor {
        n,
        inner: Factored::Banded { lu: m, piv },
    })
}

/// Solves for all right-hand-side columns at once.
pub fn lu_solve(
    f: &LuFactor,
    rhs: &DenseBlock<Complex64>,
    mode: SolveMode,
) -> Result<DenseBlock<Complex64>, LinalgError> {
    if rhs.rows() != f.n {
        return Err(LinalgError::DimensionMismatch {
            what: "right-hand side rows",
            expected: f.n,
            got: rhs.rows(),
        });
    }
    let mut x = rhs.clone();
    match &f.inner {
        Factored::Dense { lu, piv } => {
            for j in 0..x.cols() {
                dense_solve_in_place(lu, piv, x.col_mut(j), mode);
            }
        }
        Factored::Banded { lu, piv } => {
            for j in 0..x.cols() {
                banded::solve_in_place(lu, piv, x.col_mut(j), mode);
            }
        }
    }
    Ok(x)
}

fn dense_solve_in_place(lu: &DenseBlock<Complex64>, piv: &[usize], b: &mut [Complex64], mode: SolveMode) {
    let n = lu.rows();
    match mode {
        SolveMode::Normal => {
            for (k, &p) in piv.iter().enumerate() {
                if p != k {
                    b.swap(p, k);
                }
            }
            // unit lower
            for k in 0..n {
                let bk = b[k];
                if bk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (dst, &l) in b[k + 1..].iter_mut().zip(&lu.col(k)[k + 1..]) {
                    *dst -= l * bk;
                }
            }
            for k in (0..n).rev() {
                let col = lu.col(k);
                b[k] /= col[k];
                let bk = b[k];
                for (dst, &u) in b[..k].iter_mut().zip(&col[..k]) {
                    *dst -= u * bk;
                }
            }
        }
        SolveMode::ConjugateTranspose => {
            // U^H y = b, column k of U is row k of U^H
            for k in 0..n {
                let col = lu.col(k);
                let s: Complex64 = col[..k].iter().zip(&b[..k]).map(|(u, &y)| u.conj() * y).sum();
                b[k] = (b[k] - s) / col[k].conj();
            }
            for k in (0..n).rev() {
                let col = lu.col(k);
                let s: Complex64 = col[k + 1..].iter().zip(&b[k + 1..]).map(|(l, &y)| l.conj() * y).sum();
                b[k] -= s;
            }
            for (k, &p) in piv.iter().enumerate().rev() {
                if p != k {
                    b.swap(p, k);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    fn random_complex(rows: usize, cols: usize, seed: u64) -> DenseBlock<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseBlock::from_fn(rows, cols, |_, _| c(uniform(&mut rng), uniform(&mut rng)))
    }

    fn rel_residual(m: &DenseBlock<Complex64>, x: &DenseBlock<Complex64>, y: &DenseBlock<Complex64>) -> f64 {
        m.matmul(x).max_abs_diff(y) / y.max_abs()
    }

    /// Normwise backward error in the infinity norm.
    fn backward_error(m: &DenseBlock<Complex64>, x: &DenseBlock<Complex64>, y: &DenseBlock<Complex64>) -> f64 {
        let row_sum = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        m.matmul(x).max_abs_diff(y) / (row_sum * x.max_abs() + y.max_abs())
    }

    #[test]
    fn identity_solve_is_identity() {
        let f = lu_factor(DenseBlock::identity(4)).unwrap();
        let rhs = random_complex(4, 3, 1);
        let x = lu_solve(&f, &rhs, SolveMode::Normal).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn permutation_needs_pivoting() {
        let m = DenseBlock::from_row_major(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let f = lu_factor(m).unwrap();
        let rhs = DenseBlock::from_col_major(2, 1, vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let x = lu_solve(&f, &rhs, SolveMode::Normal).unwrap();
        assert_eq!(x.as_slice(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn scalar_solve() {
        let f = lu_factor(DenseBlock::from_diagonal(&[c(2.0, 0.0)])).unwrap();
        let rhs = DenseBlock::from_col_major(1, 1, vec![c(4.0, 0.0)]).unwrap();
        assert_eq!(lu_solve(&f, &rhs, SolveMode::Normal).unwrap()[(0, 0)], c(2.0, 0.0));
    }

    #[test]
    fn random_normal_residual() {
        let m = random_complex(8, 8, 7);
        let y = random_complex(8, 5, 8);
        let f = lu_factor(m.clone()).unwrap();
        let x = lu_solve(&f, &y, SolveMode::Normal).unwrap();
        assert!(rel_residual(&m, &x, &y) <= 1e-12);
    }

    #[test]
    fn random_adjoint_residual() {
        let m = random_complex(6, 6, 11);
        let y = random_complex(6, 4, 12);
        let f = lu_factor(m.clone()).unwrap();
        let x = lu_solve(&f, &y, SolveMode::ConjugateTranspose).unwrap();
        assert!(rel_residual(&m.adjoint(), &x, &y) <= 1e-12);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = DenseBlock::from_row_major(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!(matches!(lu_factor(m), Err(LinalgError::Singular { index: 1, .. })));
        assert!(lu_factor(DenseBlock::zeros(2, 3)).is_err());
    }

    #[test]
    fn rhs_dimension_checked() {
        let f = lu_factor(DenseBlock::identity(3)).unwrap();
        assert!(lu_solve(&f, &DenseBlock::zeros(2, 1), SolveMode::Normal).is_err());
    }

    fn random_band(n: usize, kl: usize, ku: usize, seed: u64) -> (BandMatrix, DenseBlock<Complex64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = DenseBlock::zeros(n, n);
        for j in 0..n {
            for i in j.saturating_sub(ku)..(j + kl + 1).min(n) {
                // small diagonal forces pivoting
                let scale = if i == j { 0.05 } else { 1.0 };
                let v = c(uniform(&mut rng), uniform(&mut rng)) * scale;
                band.add(i, j, v);
                dense[(i, j)] = v;
            }
        }
        (band, dense)
    }

    #[test]
    fn banded_matches_dense_in_both_modes() {
        for &(n, kl, ku) in &[(12, 2, 3), (9, 0, 2), (10, 3, 0), (1, 0, 0), (15, 4, 4)] {
            let (band, dense) = random_band(n, kl, ku, (n * 100 + kl * 10 + ku) as u64);
            let y = random_complex(n, 3, 5);
            let fb = band_lu_factor(band).unwrap();
            assert!(fb.is_banded());
            for mode in [SolveMode::Normal, SolveMode::ConjugateTranspose] {
                let x = lu_solve(&fb, &y, mode).unwrap();
                let op = match mode {
                    SolveMode::Normal => dense.clone(),
                    SolveMode::ConjugateTranspose => dense.adjoint(),
                };
                let err = backward_error(&op, &x, &y);
                assert!(err <= 1e-14, "n={n} kl={kl} ku={ku} {mode:?}: {err}");
            }
        }
    }
}
