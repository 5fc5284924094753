//! Test pencils with known spectra.

use std::f64::consts::PI;

use feast_core::linalg::{SymmetricOperator, TripletBuilder};
use feast_core::Scalar;

use crate::error::{HarnessError, Result};

/// Largest generated or replicated order.
pub const MAX_GENERATED_N: usize = 100_000;

fn grid_size(nx: usize, ny: usize) -> Result<usize> {
    if nx < 2 || ny < 2 {
        return Err(HarnessError::Input(format!("grid must be at least 2x2, got {nx}x{ny}")));
    }
    match nx.checked_mul(ny) {
        Some(n) if n <= MAX_GENERATED_N => Ok(n),
        _ => Err(HarnessError::Input(format!(
            "grid {nx}x{ny} exceeds {MAX_GENERATED_N} unknowns"
        ))),
    }
}

/// 5-point Dirichlet Laplacian (unscaled: 4 on the diagonal, -1 for each
/// grid neighbour) on `nx x ny` interior nodes, with `B = I`. Node `(i, j)`
/// has index `i + j nx`.
pub fn gen_laplacian_fd(nx: usize, ny: usize) -> Result<(SymmetricOperator<f64>, SymmetricOperator<f64>)> {
    let n = grid_size(nx, ny)?;
    let mut t = TripletBuilder::with_capacity(n, n, 5 * n);
    for j in 0..ny {
        for i in 0..nx {
            let k = i + j * nx;
            t.push(k, k, 4.0);
            if i > 0 {
                t.push(k, k - 1, -1.0);
            }
            if i + 1 < nx {
                t.push(k, k + 1, -1.0);
            }
            if j > 0 {
                t.push(k, k - nx, -1.0);
            }
            if j + 1 < ny {
                t.push(k, k + nx, -1.0);
            }
        }
    }
    Ok((SymmetricOperator::from_csr(t.build())?, SymmetricOperator::identity(n)))
}

/// All eigenvalues of [`gen_laplacian_fd`], ascending.
pub fn fd_eigenvalues(nx: usize, ny: usize) -> Vec<f64> {
    let s = |k: usize, m: usize| 4.0 * (k as f64 * PI / (2.0 * (m + 1) as f64)).sin().powi(2);
    let mut v: Vec<f64> = (1..=nx)
        .flat_map(|i| (1..=ny).map(move |j| s(i, nx) + s(j, ny)))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Local node offsets of a bilinear element.
const CORNERS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Bilinear finite elements for `-Δu = λu` on the unit square with
/// homogeneous Dirichlet data: stiffness `A` and consistent mass `B` over
/// the `nx x ny` interior nodes of a uniform grid (`h = 1/(n + 1)` per
/// direction). Assembled element by element.
pub fn gen_laplacian_fem(nx: usize, ny: usize) -> Result<(SymmetricOperator<f64>, SymmetricOperator<f64>)> {
    let n = grid_size(nx, ny)?;
    let hx = 1.0 / (nx + 1) as f64;
    let hy = 1.0 / (ny + 1) as f64;
    // 1D element matrices on the reference segment, local nodes (0, 1)
    let k1 = |h: f64, a: usize, b: usize| if a == b { 1.0 / h } else { -1.0 / h };
    let m1 = |h: f64, a: usize, b: usize| if a == b { h / 3.0 } else { h / 6.0 };
    let mut ta = TripletBuilder::with_capacity(n, n, 9 * n);
    let mut tb = TripletBuilder::with_capacity(n, n, 9 * n);
    // grid nodes 0..=nx+1 per direction; interior ones are 1..=nx
    let index = |gi: usize, gj: usize| -> Option<usize> {
        (gi >= 1 && gi <= nx && gj >= 1 && gj <= ny).then(|| (gi - 1) + (gj - 1) * nx)
    };
    for ej in 0..=ny {
        for ei in 0..=nx {
            for (ax, ay) in CORNERS {
                let Some(p) = index(ei + ax, ej + ay) else { continue };
                for (bx, by) in CORNERS {
                    let Some(q) = index(ei + bx, ej + by) else { continue };
                    let stiff = k1(hx, ax, bx) * m1(hy, ay, by) + m1(hx, ax, bx) * k1(hy, ay, by);
                    let mass = m1(hx, ax, bx) * m1(hy, ay, by);
                    ta.push(p, q, stiff);
                    tb.push(p, q, mass);
                }
            }
        }
    }
    Ok((
        SymmetricOperator::from_csr(ta.build())?,
        SymmetricOperator::from_csr(tb.build())?,
    ))
}

/// All generalized eigenvalues of [`gen_laplacian_fem`], ascending.
pub fn fem_eigenvalues(nx: usize, ny: usize) -> Vec<f64> {
    let mu = |k: usize, m: usize| {
        let h = 1.0 / (m + 1) as f64;
        let c = (k as f64 * PI / (m + 1) as f64).cos();
        6.0 / (h * h) * (1.0 - c) / (2.0 + c)
    };
    let mut v: Vec<f64> = (1..=nx)
        .flat_map(|i| (1..=ny).map(move |j| mu(i, nx) + mu(j, ny)))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Block-diagonal pencil with `k` copies of `(A, B)`.
pub fn replicate<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    k: usize,
) -> Result<(SymmetricOperator<T>, SymmetricOperator<T>)> {
    let n = a.n();
    if b.n() != n {
        return Err(HarnessError::Input(format!("A is {n}x{n} but B is {0}x{0}", b.n())));
    }
    if k == 0 {
        return Err(HarnessError::Input("replication count must be at least 1".into()));
    }
    let total = n
        .checked_mul(k)
        .filter(|&t| t <= MAX_GENERATED_N)
        .ok_or_else(|| HarnessError::Input(format!("{k} copies of order {n} exceed {MAX_GENERATED_N} unknowns")))?;
    let blocks = |op: &SymmetricOperator<T>| -> Result<SymmetricOperator<T>> {
        let mut t = TripletBuilder::with_capacity(total, total, op.nnz() * k);
        for c in 0..k {
            op.for_each_entry(|i, j, v| t.push(i + c * n, j + c * n, v));
        }
        Ok(SymmetricOperator::from_csr(t.build())?)
    };
    Ok((blocks(a)?, blocks(b)?))
}
