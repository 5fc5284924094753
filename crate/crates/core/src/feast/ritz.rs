use crate::linalg::{reduced_gevp, DenseBlock, LinalgError, SymmetricOperator};
use crate::quadrature::SearchInterval;
use crate::Scalar;

/// Output of one Rayleigh-Ritz projection.
#[derive(Clone, Debug)]
pub struct RitzPairs<T> {
    /// Ascending Ritz values, one per surviving subspace direction.
    pub values: Vec<f64>,
    /// `N x k` Ritz vectors `X = Q Phi`, `B`-orthonormal.
    pub vectors: DenseBlock<T>,
    pub a_q: DenseBlock<T>,
    pub b_q: DenseBlock<T>,
    /// The reduced solve dropped near-null directions of `B_Q`.
    pub truncated: bool,
}

impl<T> RitzPairs<T> {
    /// Number of Ritz pairs (the current subspace dimension).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Projects the pencil onto `span(Q)` and solves the reduced problem.
pub fn rayleigh_ritz<T: Scalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    q: &DenseBlock<T>,
) -> Result<RitzPairs<T>, LinalgError> {
    let aq = a.apply_block(q)?;
    let bq = b.apply_block(q)?;
    let a_q = q.adjoint_matmul(&aq);
    let b_q = q.adjoint_matmul(&bq);
    let red = reduced_gevp(&a_q, &b_q)?;
    Ok(RitzPairs {
        vectors: q.matmul(&red.vectors),
        values: red.values,
        a_q,
        b_q,
        truncated: red.truncated,
    })
}

/// Sum and count of the values inside the closed interval.
pub fn trace_of_in_interval(values: &[f64], interval: &SearchInterval) -> (f64, usize) {
    values
        .iter()
        .filter(|v| interval.contains(**v))
        .fold((0.0, 0), |(s, c), v| (s + v, c + 1))
}
