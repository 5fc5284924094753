use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::LinalgError;
use crate::Scalar;

/// A dense `rows x cols` block stored column-major: entry `(i, j)` lives at
/// `data[i + j * rows]`. This layout is part of the public contract.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseBlock<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseBlock<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                what: "column-major data length",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a block from row-major data, which reads naturally in literals.
    pub fn from_row_major(rows: usize, cols: usize, data: &[T]) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                what: "row-major data length",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| data[i * cols + j]))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re().is_finite() && v.im().is_finite())
    }

    /// `self * other`.
    ///
    /// # Panics
    /// If the inner dimensions differ.
    pub fn matmul(&self, other: &DenseBlock<T>) -> DenseBlock<T> {
        assert_eq!(self.cols, other.rows, "matmul inner dimension");
        let mut out = DenseBlock::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in other.col(j).iter().enumerate() {
                if b == T::zero() {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self^H * other` without forming the adjoint.
    ///
    /// # Panics
    /// If the row counts differ.
    pub fn adjoint_matmul(&self, other: &DenseBlock<T>) -> DenseBlock<T> {
        assert_eq!(self.rows, other.rows, "adjoint_matmul row count");
        DenseBlock::from_fn(self.cols, other.cols, |i, j| {
            self.col(i).iter().zip(other.col(j)).map(|(&a, &b)| a.conj() * b).sum()
        })
    }

    pub fn adjoint(&self) -> DenseBlock<T> {
        DenseBlock::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DenseBlock<U> {
        DenseBlock {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_complex(&self) -> DenseBlock<Complex64> {
        self.map(T::to_c64)
    }

    /// Replaces the block by `(M + M^H) / 2`. Square blocks only.
    pub fn hermitian_part(&self) -> DenseBlock<T> {
        assert_eq!(self.rows, self.cols, "hermitian_part needs a square block");
        DenseBlock::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(0.5)
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> DenseBlock<T> {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            data.extend_from_slice(self.col(j));
        }
        DenseBlock {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn scale_columns(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.cols);
        for (j, &s) in factors.iter().enumerate() {
            for v in self.col_mut(j) {
                *v = v.scale(s);
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.modulus_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseBlock<T>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    pub fn add_scaled(&mut self, other: &DenseBlock<T>, alpha: T) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }
}

impl DenseBlock<Complex64> {
    /// Real part of every entry.
    pub fn real_part(&self) -> DenseBlock<f64> {
        self.map(|z| z.re)
    }
}

impl<T> Index<(usize, usize)> for DenseBlock<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseBlock<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}
