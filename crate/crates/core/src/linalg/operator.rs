use num_complex::Complex64;

use super::{BandMatrix, CsrMatrix, DenseBlock, LinalgError, TripletBuilder};
use crate::{Scalar, SymmetryClass};

#[derive(Clone, Debug, PartialEq)]
pub enum Storage<T> {
    Dense(DenseBlock<T>),
    Sparse(CsrMatrix<T>),
}

/// A real-symmetric (`T = f64`) or Hermitian (`T = Complex64`) matrix.
///
/// Construction checks that the stored entries are exactly symmetric
/// (conjugate-symmetric for complex data, with a real diagonal). Sparse
/// storage keeps both triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricOperator<T> {
    storage: Storage<T>,
}

impl<T: Scalar> SymmetricOperator<T> {
    pub fn from_dense(m: DenseBlock<T>) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(LinalgError::Empty);
        }
        let n = m.rows();
        for j in 0..n {
            for i in j..n {
                if m[(i, j)] != m[(j, i)].conj() {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self {
            storage: Storage::Dense(m),
        })
    }

    pub fn from_csr(m: CsrMatrix<T>) -> Result<Self, LinalgError> {
        if m.nrows() != m.ncols() {
            return Err(LinalgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(LinalgError::Empty);
        }
        for (i, j, v) in m.iter() {
            let mirror = {
                let (cols, vals) = m.row(j);
                cols.binary_search(&i).ok().map(|k| vals[k])
            };
            match mirror {
                Some(w) if w == v.conj() => {}
                _ => return Err(LinalgError::NotSymmetric { row: i, col: j }),
            }
        }
        Ok(Self {
            storage: Storage::Sparse(m),
        })
    }

    /// Sparse identity of order `n`.
    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    /// Sparse real diagonal.
    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let m = CsrMatrix::new(
            n,
            n,
            (0..=n).collect(),
            (0..n).collect(),
            d.iter().map(|&x| T::from_real(x)).collect(),
        )
        .expect("diagonal structure is valid");
        Self {
            storage: Storage::Sparse(m),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.rows(),
            Storage::Sparse(m) => m.nrows(),
        }
    }

    pub fn kind(&self) -> SymmetryClass {
        T::CLASS
    }

    pub fn storage(&self) -> &Storage<T> {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    /// Stored entries (all of a dense matrix, explicit ones of a sparse one).
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.rows() * m.cols(),
            Storage::Sparse(m) => m.nnz(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        match &self.storage {
            Storage::Dense(m) => m[(i, j)],
            Storage::Sparse(m) => m.get(i, j),
        }
    }

    /// Visits every stored entry (both triangles). Dense storage skips exact
    /// zeros.
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, T)) {
        match &self.storage {
            Storage::Dense(m) => {
                for j in 0..m.cols() {
                    for (i, &v) in m.col(j).iter().enumerate() {
                        if v != T::zero() {
                            f(i, j, v);
                        }
                    }
                }
            }
            Storage::Sparse(m) => m.iter().for_each(|(i, j, v)| f(i, j, v)),
        }
    }

    /// Largest `|i - j|` over nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        self.for_each_entry(|i, j, _| bw = bw.max(i.abs_diff(j)));
        bw
    }

    /// `y = self * x`.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        match &self.storage {
            Storage::Dense(m) => {
                y.iter_mut().for_each(|v| *v = T::zero());
                for (j, &xj) in x.iter().enumerate() {
                    for (yi, &a) in y.iter_mut().zip(m.col(j)) {
                        *yi += a * xj;
                    }
                }
            }
            Storage::Sparse(m) => m.mul_vec(x, y),
        }
    }

    /// `y = self * x` for a complex vector.
    pub fn apply_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        match &self.storage {
            Storage::Dense(m) => {
                y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
                for (j, &xj) in x.iter().enumerate() {
                    for (yi, &a) in y.iter_mut().zip(m.col(j)) {
                        *yi += a.to_c64() * xj;
                    }
                }
            }
            Storage::Sparse(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let (cols, vals) = m.row(i);
                    *yi = cols.iter().zip(vals).map(|(&j, &v)| v.to_c64() * x[j]).sum();
                }
            }
        }
    }

    pub fn apply_block(&self, x: &DenseBlock<T>) -> Result<DenseBlock<T>, LinalgError> {
        if x.rows() != self.n() {
            return Err(LinalgError::DimensionMismatch {
                what: "block rows",
                expected: self.n(),
                got: x.rows(),
            });
        }
        let mut out = DenseBlock::zeros(x.rows(), x.cols());
        for j in 0..x.cols() {
            self.apply(x.col(j), out.col_mut(j));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseBlock<T> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => m.to_dense(),
        }
    }

    /// Sparse copy holding the nonzero entries.
    pub fn to_sparse(&self) -> Self {
        match &self.storage {
            Storage::Sparse(_) => self.clone(),
            Storage::Dense(m) => {
                let mut b = TripletBuilder::new(m.rows(), m.cols());
                self.for_each_entry(|i, j, v| b.push(i, j, v));
                Self {
                    storage: Storage::Sparse(b.build()),
                }
            }
        }
    }

    /// Same operator viewed as Hermitian complex data.
    pub fn to_complex(&self) -> SymmetricOperator<Complex64> {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m.to_complex()),
            Storage::Sparse(m) => Storage::Sparse(
                CsrMatrix::new(
                    m.nrows(),
                    m.ncols(),
                    m.row_ptr().to_vec(),
                    m.col_idx().to_vec(),
                    m.values().iter().map(|v| v.to_c64()).collect(),
                )
                .expect("structure copied from a valid matrix"),
            ),
        };
        SymmetricOperator { storage }
    }

    /// `self + t * other`, stored sparse over the union of both patterns.
    pub fn add_scaled(&self, other: &SymmetricOperator<T>, t: f64) -> Result<Self, LinalgError> {
        check_same_dim(self, other)?;
        let n = self.n();
        let mut b = TripletBuilder::with_capacity(n, n, self.nnz() + other.nnz());
        self.for_each_entry(|i, j, v| b.push(i, j, v));
        other.for_each_entry(|i, j, v| b.push(i, j, v.scale(t)));
        Ok(Self {
            storage: Storage::Sparse(b.build()),
        })
    }
}

fn check_same_dim<T: Scalar, U: Scalar>(a: &SymmetricOperator<T>, b: &SymmetricOperator<U>) -> Result<(), LinalgError> {
    if a.n() != b.n() {
        return Err(LinalgError::DimensionMismatch {
            what: "operator order",
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(())
}

/// Dense `z B - A`.
pub fn assemble_shifted<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    z: Complex64,
) -> Result<DenseBlock<Complex64>, LinalgError> {
    check_same_dim(a, b)?;
    let n = a.n();
    let mut m = DenseBlock::zeros(n, n);
    b.for_each_entry(|i, j, v| m[(i, j)] += z * v.to_c64());
    a.for_each_entry(|i, j, v| m[(i, j)] -= v.to_c64());
    Ok(m)
}

/// Banded `z B - A` with the bandwidth of the union of both patterns.
pub fn assemble_shifted_banded<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    z: Complex64,
) -> Result<BandMatrix, LinalgError> {
    check_same_dim(a, b)?;
    let bw = a.bandwidth().max(b.bandwidth());
    let mut m = BandMatrix::zeros(a.n(), bw, bw);
    b.for_each_entry(|i, j, v| m.add(i, j, z * v.to_c64()));
    a.for_each_entry(|i, j, v| m.add(i, j, -v.to_c64()));
    Ok(m)
}
