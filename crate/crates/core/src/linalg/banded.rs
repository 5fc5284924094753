use num_complex::Complex64;

use super::{LinalgError, SolveMode};

/// Complex band matrix in LAPACK general-band layout with `kl` extra rows
/// reserved for pivoting fill-in. Entry `(i, j)` lives at
/// `ab[(kl + ku + i - j) + j * ldab]` with `ldab = 2 kl + ku + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let kl = kl.min(n.saturating_sub(1));
        let ku = ku.min(n.saturating_sub(1));
        Self {
            n,
            kl,
            ku,
            ab: vec![Complex64::new(0.0, 0.0); (2 * kl + ku + 1) * n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kl(&self) -> usize {
        self.kl
    }

    #[inline]
    pub fn ku(&self) -> usize {
        self.ku
    }

    #[inline]
    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        self.kl + self.ku + i - j + j * self.ldab()
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i + self.ku >= j && j + self.kl >= i
    }

    /// # Panics
    /// If `(i, j)` lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let p = self.pos(i, j);
        self.ab[p] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.ab[self.pos(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.ab.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// In-place band LU with partial pivoting (row interchanges). After the call
/// `m` holds the multipliers below the diagonal and `U` (upper bandwidth
/// `kl + ku`) on and above it.
pub(super) fn factor(m: &mut BandMatrix, pivot_floor: f64) -> Result<Vec<usize>, LinalgError> {
    let n = m.n;
    let (kl, ku) = (m.kl, m.ku);
    let kv = kl + ku;
    let ldab = m.ldab();
    let at = |r: usize, c: usize| kv + r - c + c * ldab;
    let mut ipiv = vec![0usize; n];
    let mut ju = 0usize;
    for j in 0..n {
        let km = kl.min(n - 1 - j);
        let mut jp = 0;
        let mut best = -1.0;
        for i in 0..=km {
            let v = m.ab[at(j + i, j)].norm();
            if v > best {
                best = v;
                jp = i;
            }
        }
        ipiv[j] = j + jp;
        if best <= pivot_floor {
            return Err(LinalgError::Singular {
                index: j,
                magnitude: best,
            });
        }
        ju = ju.max((j + ku + jp).min(n - 1));
        if jp != 0 {
            for c in j..=ju {
                m.ab.swap(at(j + jp, c), at(j, c));
            }
        }
        if km > 0 {
            let recip = Complex64::new(1.0, 0.0) / m.ab[at(j, j)];
            for i in 1..=km {
                m.ab[at(j + i, j)] *= recip;
            }
            for c in j + 1..=ju {
                let ujc = m.ab[at(j, c)];
                if ujc == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 1..=km {
                    let l = m.ab[at(j + i, j)];
                    m.ab[at(j + i, c)] -= l * ujc;
                }
            }
        }
    }
    Ok(ipiv)
}

/// Solves with a factor produced by [`factor`], overwriting `b` (one column).
pub(super) fn solve_in_place(m: &BandMatrix, ipiv: &[usize], b: &mut [Complex64], mode: SolveMode) {
    let n = m.n;
    let kl = m.kl;
    let kv = m.kl + m.ku;
    let ldab = m.ldab();
    let at = |r: usize, c: usize| kv + r - c + c * ldab;
    let ab = &m.ab;
    match mode {
        SolveMode::Normal => {
            for j in 0..n.saturating_sub(1) {
                let lm = kl.min(n - 1 - j);
                let l = ipiv[j];
                if l != j {
                    b.swap(l, j);
                }
                let bj = b[j];
                for i in 1..=lm {
                    b[j + i] -= ab[at(j + i, j)] * bj;
                }
            }
            for j in (0..n).rev() {
                b[j] /= ab[at(j, j)];
                let bj = b[j];
                for i in j.saturating_sub(kv)..j {
                    b[i] -= ab[at(i, j)] * bj;
                }
            }
        }
        SolveMode::ConjugateTranspose => {
            for j in 0..n {
                let mut s = b[j];
                for i in j.saturating_sub(kv)..j {
                    s -= ab[at(i, j)].conj() * b[i];
                }
                b[j] = s / ab[at(j, j)].conj();
            }
            for j in (0..n.saturating_sub(1)).rev() {
                let lm = kl.min(n - 1 - j);
                let mut s = b[j];
                for i in 1..=lm {
                    s -= ab[at(j + i, j)].conj() * b[j + i];
                }
                b[j] = s;
                let l = ipiv[j];
                if l != j {
                    b.swap(l, j);
                }
            }
        }
    }
}
