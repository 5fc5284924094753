use crate::linalg::{DenseBlock, LinalgError, SymmetricOperator};
use crate::Scalar;

/// Largest order accepted by the dense reference solver.
pub const MAX_ORACLE_DIM: usize = 2000;

const QL_MAX_ITERS: usize = 60;

/// Full spectrum of a pencil.
#[derive(Clone, Debug)]
pub struct OracleSpectrum<T> {
    /// All `N` eigenvalues, ascending.
    pub values: Vec<f64>,
    /// `B`-orthonormal eigenvectors, one per column.
    pub vectors: DenseBlock<T>,
}

/// Dense reference solution of `A x = lambda B x` for Hermitian `A` and
/// Hermitian positive definite `B`.
pub fn reference_gevp<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
) -> Result<OracleSpectrum<T>, LinalgError> {
    let (values, vectors) = solve(a, b, true)?;
    Ok(OracleSpectrum {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only; skips the vector accumulation.
pub fn reference_eigenvalues<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
) -> Result<Vec<f64>, LinalgError> {
    Ok(solve(a, b, false)?.0)
}

fn solve<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<DenseBlock<T>>), LinalgError> {
    let n = a.n();
    if b.n() != n {
        return Err(LinalgError::DimensionMismatch {
            what: "operator order",
            expected: n,
            got: b.n(),
        });
    }
    if n > MAX_ORACLE_DIM {
        return Err(LinalgError::TooLarge {
            dim: n,
            limit: MAX_ORACLE_DIM,
        });
    }
    let l = cholesky_lower(b.to_dense())?;
    let mut c = congruence(&l, a.to_dense());
    let mut qacc = want_vectors.then(|| DenseBlock::<T>::identity(n));
    let (d, off) = tridiagonalize(&mut c, qacc.as_mut());

    // Rotate the Hermitian tridiagonal to a real one: T = P T' P^H with
    // P = diag(phase), T' having off-diagonal |off_i|.
    let mut phase = vec![T::one(); n];
    let mut sub = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let m = off[i].modulus();
        sub[i + 1] = m;
        phase[i + 1] = if m > 0.0 {
            phase[i] * off[i].scale(1.0 / m)
        } else {
            phase[i]
        };
    }
    let mut w = want_vectors.then(|| DenseBlock::<f64>::identity(n));
    let mut values = d;
    tql2(&mut values, &mut sub, w.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors = match (qacc, w) {
        (Some(q), Some(w)) => {
            let pw = DenseBlock::from_fn(n, n, |i, j| phase[i].scale(w[(i, order[j])]));
            let y = q.matmul(&pw);
            Some(back_substitute_adjoint(&l, y))
        }
        _ => None,
    };
    Ok((sorted, vectors))
}

fn cholesky_lower<T: Scalar>(m: DenseBlock<T>) -> Result<DenseBlock<T>, LinalgError> {
    let n = m.rows();
    let mut l = DenseBlock::<T>::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)].re();
        for k in 0..j {
            diag -= l[(j, k)].modulus_sqr();
        }
        if !(diag > 0.0) {
            return Err(LinalgError::NotPositiveDefinite { index: j, pivot: diag });
        }
        let ljj = diag.sqrt();
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

/// `L^{-1} M` by forward substitution, column by column.
fn forward_substitute<T: Scalar>(l: &DenseBlock<T>, mut m: DenseBlock<T>) -> DenseBlock<T> {
    let n = l.rows();
    for c in 0..m.cols() {
        let col = m.col_mut(c);
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= l[(i, k)] * col[k];
            }
            col[i] = s.scale(1.0 / l[(i, i)].re());
        }
    }
    m
}

/// `L^{-H} M` by back substitution.
fn back_substitute_adjoint<T: Scalar>(l: &DenseBlock<T>, mut m: DenseBlock<T>) -> DenseBlock<T> {
    let n = l.rows();
    for c in 0..m.cols() {
        let col = m.col_mut(c);
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * col[k];
            }
            col[i] = s.scale(1.0 / l[(i, i)].re());
        }
    }
    m
}

/// `L^{-1} A L^{-H}`, made exactly Hermitian.
fn congruence<T: Scalar>(l: &DenseBlock<T>, a: DenseBlock<T>) -> DenseBlock<T> {
    let left = forward_substitute(l, a);
    let c = forward_substitute(l, left.adjoint());
    let n = c.rows();
    DenseBlock::from_fn(n, n, |i, j| {
        if i == j {
            T::from_real(c[(i, i)].re())
        } else {
            (c[(i, j)] + c[(j, i)].conj()).scale(0.5)
        }
    })
}

/// Householder reduction of Hermitian `c` to tridiagonal form. Returns the
/// real diagonal and the (possibly complex) subdiagonal; `q` accumulates the
/// reflectors so that `c_original = Q T Q^H`.
fn tridiagonalize<T: Scalar>(c: &mut DenseBlock<T>, mut q: Option<&mut DenseBlock<T>>) -> (Vec<f64>, Vec<T>) {
    let n = c.rows();
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = c[(k + 1, k)];
        let norm = (k + 1..n).map(|i| c[(i, k)].modulus_sqr()).sum::<f64>().sqrt();
        let tail = (k + 2..n).map(|i| c[(i, k)].modulus_sqr()).sum::<f64>();
        if norm == 0.0 || tail == 0.0 {
            continue;
        }
        let x0_abs = x0.modulus();
        let ph = if x0_abs > 0.0 { x0.scale(1.0 / x0_abs) } else { T::one() };
        let alpha = -(ph.scale(norm));
        let v = &mut v[..m];
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = c[(i, k)];
        }
        v[0] -= alpha;
        let vhv: f64 = v.iter().map(|z| z.modulus_sqr()).sum();
        let tau = 2.0 / vhv;

        // p = tau * S v
        let p = &mut p[..m];
        p.iter_mut().for_each(|z| *z = T::zero());
        for j in 0..m {
            let vj = v[j];
            let col = &c.col(k + 1 + j)[k + 1..];
            for i in 0..m {
                p[i] += col[i] * vj;
            }
        }
        p.iter_mut().for_each(|z| *z = z.scale(tau));
        let vhp: f64 = v.iter().zip(p.iter()).map(|(a, b)| (a.conj() * *b).re()).sum();
        let kk = 0.5 * tau * vhp;
        for i in 0..m {
            p[i] -= v[i].scale(kk);
        }
        // S -= v q^H + q v^H
        for j in 0..m {
            let (vj, qj) = (v[j].conj(), p[j].conj());
            let col = &mut c.col_mut(k + 1 + j)[k + 1..];
            for i in 0..m {
                col[i] -= v[i] * qj + p[i] * vj;
            }
        }
        c[(k + 1, k)] = alpha;
        c[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            c[(i, k)] = T::zero();
            c[(k, i)] = T::zero();
        }

        if let Some(q) = q.as_deref_mut() {
            // Q[:, k+1..] -= tau (Q v) v^H
            let rows = q.rows();
            let mut w = vec![T::zero(); rows];
            for j in 0..m {
                let vj = v[j];
                let col = q.col(k + 1 + j);
                for i in 0..rows {
                    w[i] += col[i] * vj;
                }
            }
            for j in 0..m {
                let vj = v[j].conj().scale(tau);
                let col = q.col_mut(k + 1 + j);
                for i in 0..rows {
                    col[i] -= w[i] * vj;
                }
            }
        }
    }
    let d = (0..n).map(|i| c[(i, i)].re()).collect();
    let off = (0..n.saturating_sub(1)).map(|i| c[(i + 1, i)]).collect();
    (d, off)
}

/// Implicit QL on a real symmetric tridiagonal matrix (diagonal `d`,
/// subdiagonal `e[1..]`). Eigenvalues overwrite `d`; `v`, if given, is
/// multiplied by the accumulated rotations.
fn tql2(d: &mut [f64], e: &mut [f64], mut v: Option<&mut DenseBlock<f64>>) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITERS {
                    return Err(LinalgError::InvalidStructure(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        for k in 0..n {
                            let h = v[(k, i + 1)];
                            v[(k, i + 1)] = s * v[(k, i)] + c * h;
                            v[(k, i)] = c * v[(k, i)] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    fn random_pencil(n: usize, seed: u64) -> (SymmetricOperator<f64>, SymmetricOperator<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DenseBlock::from_fn(n, n, |_, _| uniform(&mut rng));
        let a = g.hermitian_part();
        let h = DenseBlock::from_fn(n, n, |_, _| uniform(&mut rng));
        let mut b = h.adjoint_matmul(&h);
        for i in 0..n {
            b[(i, i)] += n as f64;
        }
        (
            SymmetricOperator::from_dense(a).unwrap(),
            SymmetricOperator::from_dense(b.hermitian_part()).unwrap(),
        )
    }

    fn check_invariants<T: Scalar>(a: &SymmetricOperator<T>, b: &SymmetricOperator<T>, s: &OracleSpectrum<T>) {
        let n = a.n();
        let x = &s.vectors;
        let ax = a.apply_block(x).unwrap();
        let mut bx = b.apply_block(x).unwrap();
        let lam_x = {
            for j in 0..n {
                let l = s.values[j];
                bx.col_mut(j).iter_mut().for_each(|v| *v = v.scale(l));
            }
            bx
        };
        let a_norm = a.to_dense().max_abs();
        assert!(
            ax.max_abs_diff(&lam_x) <= 1e-10 * a_norm,
            "residual {}",
            ax.max_abs_diff(&lam_x)
        );
        let gram = x.adjoint_matmul(&b.apply_block(x).unwrap());
        assert!(gram.max_abs_diff(&DenseBlock::identity(n)) <= 1e-11);
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_examples() {
        let a = SymmetricOperator::<f64>::diagonal(&[3.0, 1.0, 2.0]);
        let s = reference_gevp(&a, &SymmetricOperator::identity(3)).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 3.0]);
        let s = reference_gevp(
            &SymmetricOperator::<f64>::identity(2),
            &SymmetricOperator::diagonal(&[1.0, 4.0]),
        )
        .unwrap();
        assert_eq!(s.values, vec![0.25, 1.0]);
    }

    #[test]
    fn random_pencils_satisfy_invariants() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (17, 4), (50, 5)] {
            let (a, b) = random_pencil(n, seed);
            let s = reference_gevp(&a, &b).unwrap();
            check_invariants(&a, &b, &s);
            let vals = reference_eigenvalues(&a, &b).unwrap();
            for (x, y) in vals.iter().zip(&s.values) {
                assert!((x - y).abs() <= 1e-13 * (1.0 + y.abs()));
            }
        }
    }

    #[test]
    fn random_hermitian_pencil() {
        let n = 30;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = DenseBlock::from_fn(n, n, |_, _| Complex64::new(uniform(&mut rng), uniform(&mut rng)));
        let a = SymmetricOperator::from_dense(g.hermitian_part()).unwrap();
        let h = DenseBlock::from_fn(n, n, |_, _| Complex64::new(uniform(&mut rng), uniform(&mut rng)));
        let mut bm = h.adjoint_matmul(&h);
        for i in 0..n {
            bm[(i, i)] += Complex64::new(n as f64, 0.0);
        }
        let b = SymmetricOperator::from_dense(bm.hermitian_part()).unwrap();
        let s = reference_gevp(&a, &b).unwrap();
        check_invariants(&a, &b, &s);
    }

    #[test]
    fn hermitian_two_by_two() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = SymmetricOperator::from_dense(DenseBlock::from_row_major(2, 2, &[one, i, -i, one]).unwrap()).unwrap();
        let s = reference_gevp(&a, &SymmetricOperator::identity(2)).unwrap();
        assert!(s.values[0].abs() < 1e-15 && (s.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn path_graph_matches_closed_form() {
        let n = 40;
        let a = DenseBlock::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let vals = reference_eigenvalues(
            &SymmetricOperator::from_dense(a).unwrap(),
            &SymmetricOperator::identity(n),
        )
        .unwrap();
        for (k, v) in vals.iter().enumerate() {
            let t = (k + 1) as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64);
            assert!((v - 4.0 * t.sin().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_indefinite_b() {
        let b = SymmetricOperator::<f64>::diagonal(&[1.0, -1.0]);
        assert!(matches!(
            reference_gevp(&SymmetricOperator::identity(2), &b),
            Err(LinalgError::NotPositiveDefinite { index: 1, .. })
        ));
    }
}
