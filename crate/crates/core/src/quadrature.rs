//! Gauss-Legendre rules and their mapping onto the upper half of the circle
//! that encloses a search interval.
//!
//! Node `x` in `(-1, 1)` maps to the angle `theta = (pi / 2)(1 - x)` and the
//! complex shift `z = c + r exp(i theta)`, where `c` is the interval midpoint
//! and `r` its half width. `x -> 1` approaches the right endpoint, `x -> -1`
//! the left one.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Largest supported rule.
pub const MAX_POINTS: usize = 64;

const NEWTON_MAX_ITERS: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("number of quadrature points must be in 1..={MAX_POINTS}, got {0}")]
    PointCount(usize),
    #[error("invalid search interval [{lambda_min}, {lambda_max}]: {reason}")]
    Interval {
        lambda_min: f64,
        lambda_max: f64,
        reason: &'static str,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    /// Ascending, symmetric about zero.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `P_n'(x)` from the recurrence pair.
fn legendre_derivative(n: usize, x: f64, pn: f64, pn1: f64) -> f64 {
    n as f64 * (x * pn - pn1) / (x * x - 1.0)
}

/// n-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Positive nodes are found by Newton iteration from `cos(pi (i + 3/4) / (n + 1/2))`
/// and reflected, so the rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> Result<GaussLegendre, QuadratureError> {
    if n == 0 || n > MAX_POINTS {
        return Err(QuadratureError::PointCount(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    if n == 1 {
        weights[0] = 2.0;
        return Ok(GaussLegendre { nodes, weights });
    }
    for i in 0..n / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITERS {
            let (pn, pn1) = legendre_pair(n, x);
            let dx = pn / legendre_derivative(n, x, pn, pn1);
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (pn, pn1) = legendre_pair(n, x);
        let dp = legendre_derivative(n, x, pn, pn1);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let mid = n / 2;
        // P_n'(0) = n P_{n-1}(0) for odd n
        let (_, pn1) = legendre_pair(n, 0.0);
        let dp = n as f64 * pn1;
        nodes[mid] = 0.0;
        weights[mid] = 2.0 / (dp * dp);
    }
    Ok(GaussLegendre { nodes, weights })
}

/// Closed search interval `[lambda_min, lambda_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchInterval {
    lambda_min: f64,
    lambda_max: f64,
}

impl SearchInterval {
    pub fn new(lambda_min: f64, lambda_max: f64) -> Result<Self, QuadratureError> {
        if !lambda_min.is_finite() || !lambda_max.is_finite() {
            return Err(QuadratureError::Interval {
                lambda_min,
                lambda_max,
                reason: "endpoints must be finite",
            });
        }
        if !(lambda_min < lambda_max) {
            return Err(QuadratureError::Interval {
                lambda_min,
                lambda_max,
                reason: "lambda_min must be strictly below lambda_max",
            });
        }
        Ok(Self { lambda_min, lambda_max })
    }

    #[inline]
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    #[inline]
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn center(&self) -> f64 {
        (self.lambda_max + self.lambda_min) / 2.0
    }

    pub fn radius(&self) -> f64 {
        (self.lambda_max - self.lambda_min) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.lambda_max - self.lambda_min
    }

    /// Closed-interval membership: endpoints are inside.
    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.lambda_min && lambda <= self.lambda_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPoint {
    /// Gauss node in `(-1, 1)`.
    pub x: f64,
    pub weight: f64,
    /// `(pi / 2)(1 - x)`, in `(0, pi)`.
    pub theta: f64,
    /// Shift on the upper half circle.
    pub z: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub interval: SearchInterval,
    pub radius: f64,
    /// Ordered by ascending node.
    pub points: Vec<ContourPoint>,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Places an `n_e`-point Gauss-Legendre rule on the upper half circle
/// centered at the interval midpoint.
pub fn build_contour(interval: SearchInterval, n_e: usize) -> Result<Contour, QuadratureError> {
    let (lo, hi) = (interval.lambda_min(), interval.lambda_max());
    let scale = 1f64.max(lo.abs()).max(hi.abs());
    if interval.width() <= 1e-12 * scale {
        return Err(QuadratureError::Interval {
            lambda_min: lo,
            lambda_max: hi,
            reason: "interval width is below 1e-12 relative to its magnitude",
        });
    }
    let rule = gauss_legendre(n_e)?;
    let r = interval.radius();
    let c = interval.center();
    let points = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &weight)| {
            let theta = -(PI / 2.0) * (x - 1.0);
            ContourPoint {
                x,
                weight,
                theta,
                z: Complex64::new(c, 0.0) + Complex64::from_polar(r, theta),
            }
        })
        .collect();
    Ok(Contour {
        interval,
        radius: r,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pairs printed for the 8-point rule (positive nodes, ascending).
    const PRINTED_EIGHT: [(f64, f64); 4] = [
        (0.183434642495649, 0.362683783378361),
        (0.525532409916328, 0.313706645877887),
        (0.796666477413626, 0.222381034453374),
        (0.960289856497536, 0.101228536290376),
    ];

    #[test]
    fn eight_point_rule_matches_printed_values() {
        let rule = gauss_legendre(8).unwrap();
        for (k, &(x, w)) in PRINTED_EIGHT.iter().enumerate() {
            let pos = 4 + k;
            let neg = 3 - k;
            assert!((rule.nodes[pos] - x).abs() <= 1e-15, "node {k}");
            assert!((rule.weights[pos] - w).abs() <= 1e-15, "weight {k}");
            assert_eq!(rule.nodes[neg], -rule.nodes[pos]);
            assert_eq!(rule.weights[neg], rule.weights[pos]);
        }
    }

    #[test]
    fn one_point_is_midpoint() {
        let rule = gauss_legendre(1).unwrap();
        assert_eq!(rule.nodes, vec![0.0]);
        assert_eq!(rule.weights, vec![2.0]);
    }

    /// Bisection on the explicit polynomial (3x^2 - 1) / 2, independent of
    /// the Newton path.
    #[test]
    fn two_point_rule_against_bisection() {
        let p2 = |x: f64| (3.0 * x * x - 1.0) / 2.0;
        let (mut lo, mut hi) = (0.1, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p2(lo) * p2(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 0.5773502691896258).abs() < 1e-15);
        let rule = gauss_legendre(2).unwrap();
        assert!((rule.nodes[1] - root).abs() <= 1e-15);
        assert!((rule.nodes[0] + root).abs() <= 1e-15);
        for w in rule.weights {
            assert!((w - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn odd_rules_contain_zero() {
        for n in (1..=MAX_POINTS).step_by(2) {
            let rule = gauss_legendre(n).unwrap();
            assert_eq!(rule.nodes[n / 2], 0.0);
        }
    }

    #[test]
    fn out_of_range_counts_rejected() {
        assert_eq!(gauss_legendre(0), Err(QuadratureError::PointCount(0)));
        assert!(gauss_legendre(MAX_POINTS + 1).is_err());
        let iv = SearchInterval::new(0.0, 1.0).unwrap();
        assert!(build_contour(iv, 0).is_err());
    }

    #[test]
    fn interval_validation() {
        assert!(SearchInterval::new(1.0, 1.0).is_err());
        assert!(SearchInterval::new(2.0, 1.0).is_err());
        assert!(SearchInterval::new(f64::NAN, 1.0).is_err());
        let tiny = SearchInterval::new(1e6, 1e6 + 1e-7).unwrap();
        assert!(build_contour(tiny, 8).is_err());
        let iv = SearchInterval::new(0.0, 2.0).unwrap();
        assert!(iv.contains(0.0) && iv.contains(2.0) && !iv.contains(2.0 + 1e-15));
    }

    #[test]
    fn midpoint_node_maps_to_top_of_circle() {
        let iv = SearchInterval::new(-1.0, 1.0).unwrap();
        let contour = build_contour(iv, 1).unwrap();
        let p = contour.points[0];
        assert!((p.theta - PI / 2.0).abs() < 1e-16);
        assert!(p.z.re.abs() < 1e-16 && (p.z.im - 1.0).abs() < 1e-16);
    }

    #[test]
    fn endpoint_mapping_limits() {
        let iv = SearchInterval::new(0.0, 2.0).unwrap();
        let c = build_contour(iv, 64).unwrap();
        let first = c.points.first().unwrap();
        let last = c.points.last().unwrap();
        // most negative node sits near lambda_min, most positive near lambda_max
        assert!(first.z.re < 0.01 && first.theta > 3.1);
        assert!(last.z.re > 1.99 && last.theta < 0.05);
        assert_eq!(c.radius, 1.0);
    }

    #[test]
    fn eight_point_first_node_geometry() {
        // cos/sin of theta_1 evaluated via Taylor series in f64 as an independent route
        let x1 = PRINTED_EIGHT[0].0;
        let theta = -(PI / 2.0) * (x1 - 1.0);
        let (mut cos, mut sin, mut term_c, mut term_s) = (0.0, 0.0, 1.0, theta);
        for k in 0..30 {
            cos += term_c;
            sin += term_s;
            let k = k as f64;
            term_c *= -theta * theta / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            term_s *= -theta * theta / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        let iv = SearchInterval::new(0.0, 2.0).unwrap();
        let contour = build_contour(iv, 8).unwrap();
        let p = contour.points[4];
        // computed node is within 1e-15 of the printed one
        assert!((p.theta - theta).abs() < (PI / 2.0) * 1e-15 + 4.0 * f64::EPSILON);
        assert!((p.z.re - (1.0 + cos)).abs() < 1e-14);
        assert!((p.z.im - sin).abs() < 1e-14);
    }

    #[test]
    fn contour_points_are_sorted_and_above_axis() {
        let iv = SearchInterval::new(-3.0, 5.0).unwrap();
        for n in 1..=MAX_POINTS {
            let c = build_contour(iv, n).unwrap();
            assert!(c.points.windows(2).all(|w| w[0].x < w[1].x));
            assert!(c.points.iter().all(|p| p.z.im > 0.0 && p.theta > 0.0 && p.theta < PI));
            let sum: f64 = c.points.iter().map(|p| p.weight).sum();
            assert!((sum - 2.0).abs() <= 1e-14, "n={n} sum={sum}");
        }
    }
}
