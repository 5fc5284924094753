//! Scalar abstraction over the two supported problem classes.
//!
//! Real-symmetric pencils use `f64`, Hermitian pencils use [`Complex64`]. All
//! kernels in the crate are generic over [`Scalar`] so the two classes share
//! one code path except where the filter formula differs.

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Symmetry class of a pencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    RealSymmetric,
    Hermitian,
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymmetryClass::RealSymmetric => f.write_str("real"),
            SymmetryClass::Hermitian => f.write_str("hermitian"),
        }
    }
}

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + 'static
{
    const CLASS: SymmetryClass;

    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    /// Modulus.
    fn modulus(self) -> f64;
    fn modulus_sqr(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn to_c64(self) -> Complex64;
    /// Projects a complex value into this scalar type. Real scalars keep the
    /// real part.
    fn from_c64(z: Complex64) -> Self;

    fn scale(self, x: f64) -> Self {
        self * Self::from_real(x)
    }
}

impl Scalar for f64 {
    const CLASS: SymmetryClass = SymmetryClass::RealSymmetric;

    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        self * x
    }
}

impl Scalar for Complex64 {
    const CLASS: SymmetryClass = SymmetryClass::Hermitian;

    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        Complex64::new(self.re * x, self.im * x)
    }
}
