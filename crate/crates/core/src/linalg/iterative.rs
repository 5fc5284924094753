//! Restarted GMRES for the complex shifted systems, used when the inner
//! solves are only required to reach a modest relative residual.

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<Complex64>,
    /// `||b - M x|| / ||b||` at exit (2-norm).
    pub relative_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// GMRES(`restart`) from a zero initial guess. Stops once the relative
/// residual reaches `tol` or after `max_iters` inner iterations, returning
/// the current iterate either way.
pub fn gmres(
    apply: impl Fn(&[Complex64], &mut [Complex64]),
    b: &[Complex64],
    tol: f64,
    restart: usize,
    max_iters: usize,
) -> GmresOutcome {
    let n = b.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return GmresOutcome {
            x,
            relative_residual: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let m = restart.clamp(1, n.max(1));
    let mut r = b.to_vec();
    let mut w = vec![zero; n];
    let mut iterations = 0;
    let mut rel = 1.0;
    while iterations < max_iters {
        let beta = norm(&r);
        rel = beta / b_norm;
        if rel <= tol {
            break;
        }
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns, already rotated
        let mut h: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<Complex64> = Vec::with_capacity(m);
        let mut g = vec![zero; m + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut k = 0;
        while k < m && iterations < max_iters {
            apply(&basis[k], &mut w);
            let mut col = vec![zero; k + 2];
            // modified Gram-Schmidt for the Arnoldi basis
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                col[i] = hij;
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj -= hij * vj;
                }
            }
            let hnext = norm(&w);
            col[k + 1] = Complex64::new(hnext, 0.0);
            for i in 0..k {
                let (c, s) = (cs[i], sn[i]);
                let t = c * col[i] + s * col[i + 1];
                col[i + 1] = -s.conj() * col[i] + c * col[i + 1];
                col[i] = t;
            }
            let (c, s) = givens(col[k], col[k + 1]);
            col[k] = c * col[k] + s * col[k + 1];
            col[k + 1] = zero;
            g[k + 1] = -s.conj() * g[k];
            g[k] *= c;
            cs.push(c);
            sn.push(s);
            h.push(col);
            iterations += 1;
            k += 1;
            rel = g[k].norm() / b_norm;
            if rel <= tol || hnext == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }
        // back substitution for the k x k triangle
        let mut y = vec![zero; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for (j, yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[j][i] * yj;
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                *xi += yj * vi;
            }
        }
        apply(&x, &mut w);
        for ((ri, bi), wi) in r.iter_mut().zip(b).zip(&w) {
            *ri = bi - wi;
        }
        rel = norm(&r) / b_norm;
        if rel <= tol {
            break;
        }
    }
    GmresOutcome {
        x,
        relative_residual: rel,
        iterations,
        converged: rel <= tol,
    }
}

/// Complex Givens rotation `[c s; -conj(s) c]` with real `c` that zeroes `b`
/// in `(a, b)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}
