#![allow(dead_code)]

use feast_core::linalg::{DenseBlock, SymmetricOperator, TripletBuilder};
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Uniform(ChaCha8Rng);

impl Uniform {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[-1, 1)`.
    pub fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        let re = self.next();
        Complex64::new(re, self.next())
    }

    pub fn block(&mut self, rows: usize, cols: usize) -> DenseBlock<f64> {
        DenseBlock::from_fn(rows, cols, |_, _| self.next())
    }

    pub fn complex_block(&mut self, rows: usize, cols: usize) -> DenseBlock<Complex64> {
        DenseBlock::from_fn(rows, cols, |_, _| self.complex())
    }
}

/// Random symmetric `A` and well-conditioned s.p.d. `B = I + G^T G / n`.
pub fn random_pencil(n: usize, seed: u64) -> (SymmetricOperator<f64>, SymmetricOperator<f64>) {
    let mut u = Uniform::new(seed);
    let a = u.block(n, n).hermitian_part();
    let g = u.block(n, n);
    let mut b = g.adjoint_matmul(&g);
    for v in b.as_mut_slice() {
        *v /= n as f64;
    }
    for i in 0..n {
        b[(i, i)] += 1.0;
    }
    (
        SymmetricOperator::from_dense(a).unwrap(),
        SymmetricOperator::from_dense(b.hermitian_part()).unwrap(),
    )
}

pub fn random_hermitian_pencil(n: usize, seed: u64) -> (SymmetricOperator<Complex64>, SymmetricOperator<Complex64>) {
    let mut u = Uniform::new(seed);
    let a = u.complex_block(n, n).hermitian_part();
    let g = u.complex_block(n, n);
    let mut b = g.adjoint_matmul(&g);
    for v in b.as_mut_slice() {
        *v /= n as f64;
    }
    for i in 0..n {
        b[(i, i)] += Complex64::new(1.0, 0.0);
    }
    (
        SymmetricOperator::from_dense(a).unwrap(),
        SymmetricOperator::from_dense(b.hermitian_part()).unwrap(),
    )
}

/// Unscaled 5-point Dirichlet Laplacian on an `nx x ny` interior grid.
pub fn laplacian_2d(nx: usize, ny: usize) -> SymmetricOperator<f64> {
    let n = nx * ny;
    let mut t = TripletBuilder::new(n, n);
    let id = |i: usize, j: usize| i + j * nx;
    for j in 0..ny {
        for i in 0..nx {
            let k = id(i, j);
            t.push(k, k, 4.0);
            if i + 1 < nx {
                t.push(k, id(i + 1, j), -1.0);
                t.push(id(i + 1, j), k, -1.0);
            }
            if j + 1 < ny {
                t.push(k, id(i, j + 1), -1.0);
                t.push(id(i, j + 1), k, -1.0);
            }
        }
    }
    SymmetricOperator::from_csr(t.build()).unwrap()
}

/// Interval whose endpoints are the midpoints of the gaps around
/// `values[lo..hi]` (ascending input), or `None` if a gap is narrower than
/// `2 * margin`.
pub fn interval_around(values: &[f64], lo: usize, hi: usize, margin: f64) -> Option<(f64, f64)> {
    let left = if lo == 0 {
        values[0] - 1.0
    } else {
        0.5 * (values[lo - 1] + values[lo])
    };
    let right = if hi == values.len() {
        values[hi - 1] + 1.0
    } else {
        0.5 * (values[hi - 1] + values[hi])
    };
    let gap_ok = |x: f64| values.iter().all(|v| (v - x).abs() >= margin);
    (gap_ok(left) && gap_ok(right)).then_some((left, right))
}
