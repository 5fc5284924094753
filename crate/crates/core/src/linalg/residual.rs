use super::{DenseBlock, LinalgError, SymmetricOperator};
use crate::Scalar;

/// Below this `||A x||_1` the relative residual is undefined; the absolute
/// residual is reported instead and the pair is flagged.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualNorms {
    /// `||A x_i - lambda_i B x_i||_1 / ||A x_i||_1` per pair.
    pub per_pair: Vec<f64>,
    /// Pairs whose denominator vanished; their entry is the absolute residual.
    pub degenerate: Vec<bool>,
    /// Largest entry of `per_pair`, zero when there are no pairs.
    pub max: f64,
}

pub fn residual_norms<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    lambdas: &[f64],
    x: &DenseBlock<T>,
) -> Result<ResidualNorms, LinalgError> {
    if x.cols() != lambdas.len() {
        return Err(LinalgError::DimensionMismatch {
            what: "eigenvector count",
            expected: lambdas.len(),
            got: x.cols(),
        });
    }
    if a.n() != b.n() || x.rows() != a.n() {
        return Err(LinalgError::DimensionMismatch {
            what: "eigenvector length",
            expected: a.n(),
            got: x.rows(),
        });
    }
    let n = a.n();
    let mut ax = vec![T::zero(); n];
    let mut bx = vec![T::zero(); n];
    let mut per_pair = Vec::with_capacity(lambdas.len());
    let mut degenerate = Vec::with_capacity(lambdas.len());
    for (j, &lambda) in lambdas.iter().enumerate() {
        a.apply(x.col(j), &mut ax);
        b.apply(x.col(j), &mut bx);
        let num: f64 = ax.iter().zip(&bx).map(|(&p, &q)| (p - q.scale(lambda)).modulus()).sum();
        let den: f64 = ax.iter().map(|v| v.modulus()).sum();
        if den < DEGENERATE_DENOMINATOR {
            per_pair.push(num);
            degenerate.push(true);
        } else {
            per_pair.push(num / den);
            degenerate.push(false);
        }
    }
    let max = per_pair.iter().copied().fold(0.0, f64::max);
    Ok(ResidualNorms {
        per_pair,
        degenerate,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_pairs_have_zero_residual() {
        let a = SymmetricOperator::from_dense(DenseBlock::from_diagonal(&[1.0, 2.0])).unwrap();
        let b = SymmetricOperator::identity(2);
        let r = residual_norms(&a, &b, &[1.0, 2.0], &DenseBlock::identity(2)).unwrap();
        assert_eq!(r.per_pair, vec![0.0, 0.0]);
        assert_eq!(r.max, 0.0);
    }

    #[test]
    fn scalar_residual() {
        let a = SymmetricOperator::from_dense(DenseBlock::from_diagonal(&[1.0])).unwrap();
        let b = SymmetricOperator::identity(1);
        let r = residual_norms(&a, &b, &[1.1], &DenseBlock::identity(1)).unwrap();
        assert!((r.per_pair[0] - 0.1).abs() < 1e-15);
        assert_eq!(r.max, r.per_pair[0]);
    }

    #[test]
    fn null_column_is_flagged() {
        let a = SymmetricOperator::from_dense(DenseBlock::from_diagonal(&[0.0, 3.0])).unwrap();
        let b = SymmetricOperator::identity(2);
        let x = DenseBlock::from_row_major(2, 1, &[1.0, 0.0]).unwrap();
        let r = residual_norms(&a, &b, &[0.5], &x).unwrap();
        assert_eq!(r.degenerate, vec![true]);
        assert_eq!(r.per_pair, vec![0.5]);
    }

    #[test]
    fn count_mismatch_rejected() {
        let a = SymmetricOperator::<f64>::identity(2);
        assert!(residual_norms(&a, &a, &[1.0], &DenseBlock::identity(2)).is_err());
    }
}
