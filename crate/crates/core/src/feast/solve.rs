use std::time::Instant;

use super::ritz::{rayleigh_ritz, RitzPairs};
use super::subspace::{accumulate_with, prepare_contour, random_block, ContourSystems, FeastScalar};
use super::{FeastConfig, FeastError};
use crate::linalg::{
    residual_norms, DenseBlock, DirectSolver, InnerSolver, LinalgError, ResidualNorms, SymmetricOperator,
};
use crate::quadrature::{build_contour, SearchInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeastStatus {
    Converged,
    MaxLoops,
    /// Two consecutive loops found no Ritz value inside the interval.
    NoEigenvaluesInInterval,
    /// All `m0` Ritz values lie inside the interval, so `m0` was probably
    /// too small and eigenvalues may be missing.
    SubspaceSaturated,
    /// The projected `B_Q` had no usable positive directions.
    SubspaceBreakdown,
}

impl FeastStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxLoops => "max_loops",
            Self::NoEigenvaluesInInterval => "no_eigenvalues_in_interval",
            Self::SubspaceSaturated => "subspace_saturated",
            Self::SubspaceBreakdown => "subspace_breakdown",
        }
    }
}

impl std::fmt::Display for FeastStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Wall-clock seconds per phase. Never part of result comparisons.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub factorize_s: f64,
    pub solve_s: f64,
    pub reduce_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug)]
pub struct FeastResult<T> {
    pub status: FeastStatus,
    /// Ascending eigenvalues inside the interval.
    pub lambdas: Vec<f64>,
    /// Matching `B`-orthonormal eigenvectors, one per column.
    pub x: DenseBlock<T>,
    pub residuals: ResidualNorms,
    /// Filter passes performed.
    pub loops_used: usize,
    /// In-interval Ritz-value sum after each loop.
    pub trace_history: Vec<f64>,
    /// In-interval Ritz-value count after each loop.
    pub in_interval_counts: Vec<usize>,
    /// All Ritz values of the final subspace, inside the interval or not.
    pub ritz_values: Vec<f64>,
    /// All Ritz vectors of the final subspace.
    pub ritz_vectors: DenseBlock<T>,
    pub timings: Timings,
}

impl<T: FeastScalar> FeastResult<T> {
    /// `B X` over the whole final subspace: the initial block for a run on
    /// a nearby pencil.
    pub fn warm_start(&self, b: &SymmetricOperator<T>) -> Result<DenseBlock<T>, LinalgError> {
        b.apply_block(&self.ritz_vectors)
    }
}

/// [`feast_solve_with`] using the default direct solver.
pub fn feast_solve<T: FeastScalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    interval: SearchInterval,
    config: &FeastConfig,
    initial_y: Option<&DenseBlock<T>>,
) -> Result<FeastResult<T>, FeastError> {
    feast_solve_with(a, b, interval, config, initial_y, &DirectSolver::default())
}

/// Computes the eigenpairs of `A x = lambda B x` with eigenvalues inside
/// `interval`.
///
/// `B` must be positive definite. `initial_y` (`N x m0`) replaces the random
/// start; the Rayleigh-Ritz trace of that block then serves as the
/// reference for the first convergence check, so a good warm start can stop
/// after one loop.
///
/// With an inexact inner solver of relative tolerance `tau` the trace
/// tolerance is raised to `max(trace_tol, tau^2)`.
pub fn feast_solve_with<T: FeastScalar, S: InnerSolver<T> + ?Sized>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    interval: SearchInterval,
    config: &FeastConfig,
    initial_y: Option<&DenseBlock<T>>,
    solver: &S,
) -> Result<FeastResult<T>, FeastError> {
    let start = Instant::now();
    let n = a.n();
    if b.n() != n {
        return Err(LinalgError::DimensionMismatch {
            what: "operator order",
            expected: n,
            got: b.n(),
        }
        .into());
    }
    if config.class != T::CLASS {
        return Err(FeastError::InvalidConfig(format!(
            "configured class {} does not match {} operators",
            config.class,
            T::CLASS
        )));
    }
    config.validate(n)?;
    let y0 = match initial_y {
        Some(y) => {
            if y.rows() != n || y.cols() != config.m0 {
                return Err(FeastError::InvalidConfig(format!(
                    "initial block is {}x{}, expected {n}x{}",
                    y.rows(),
                    y.cols(),
                    config.m0
                )));
            }
            if !y.is_finite() {
                return Err(FeastError::InvalidConfig("initial block has non-finite entries".into()));
            }
            y.clone()
        }
        None => random_block(n, config.m0, config.seed)?,
    };
    let contour = build_contour(interval, config.n_e)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| FeastError::ThreadPool(e.to_string()))?;

    pool.install(|| {
        let mut state = LoopState::new(a, b, interval, config, solver);
        state.run(y0, initial_y.is_some(), &contour)?;
        let mut result = state.finish()?;
        result.timings.total_s = start.elapsed().as_secs_f64();
        Ok(result)
    })
}

struct Accepted<T> {
    pairs: RitzPairs<T>,
    /// Columns of `pairs` inside the interval that passed the gate.
    columns: Vec<usize>,
    /// Ritz values inside the interval, gated or not.
    raw_count: usize,
    trace: f64,
}

struct LoopState<'a, T: FeastScalar, S: ?Sized> {
    a: &'a SymmetricOperator<T>,
    b: &'a SymmetricOperator<T>,
    interval: SearchInterval,
    config: &'a FeastConfig,
    solver: &'a S,
    tol: f64,
    /// Residual above which an in-interval pair is spurious.
    gate: f64,
    last: Option<Accepted<T>>,
    status: FeastStatus,
    loops: usize,
    trace_history: Vec<f64>,
    counts: Vec<usize>,
    timings: Timings,
}

impl<'a, T: FeastScalar, S: InnerSolver<T> + ?Sized> LoopState<'a, T, S> {
    fn new(
        a: &'a SymmetricOperator<T>,
        b: &'a SymmetricOperator<T>,
        interval: SearchInterval,
        config: &'a FeastConfig,
        solver: &'a S,
    ) -> Self {
        let (tol, gate) = match solver.tolerance() {
            // inexact solves cap the attainable residual near tau
            Some(tau) => (config.trace_tol.max(tau * tau), config.spurious_tol.max(100.0 * tau)),
            None => (config.trace_tol, config.spurious_tol),
        };
        Self {
            a,
            b,
            interval,
            config,
            solver,
            tol,
            gate,
            last: None,
            status: FeastStatus::MaxLoops,
            loops: 0,
            trace_history: Vec::new(),
            counts: Vec::new(),
            timings: Timings::default(),
        }
    }

    fn prepare(&mut self, contour: &crate::quadrature::Contour) -> Result<ContourSystems<'a>, FeastError> {
        let t = Instant::now();
        let systems = prepare_contour(self.solver, self.a, self.b, contour)?;
        self.timings.factorize_s += t.elapsed().as_secs_f64();
        Ok(systems)
    }

    fn project(&mut self, q: &DenseBlock<T>) -> Result<Option<RitzPairs<T>>, FeastError> {
        let t = Instant::now();
        let rr = rayleigh_ritz(self.a, self.b, q);
        self.timings.reduce_s += t.elapsed().as_secs_f64();
        match rr {
            Ok(rr) => Ok(Some(rr)),
            Err(LinalgError::SubspaceBreakdown(_)) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// In-interval pairs of `rr` that pass the residual gate.
    fn accept(&self, rr: RitzPairs<T>) -> Result<Accepted<T>, FeastError> {
        let inside: Vec<usize> = (0..rr.len())
            .filter(|&j| self.interval.contains(rr.values[j]))
            .collect();
        let x = rr.vectors.select_columns(&inside);
        let ax = self.a.apply_block(&x)?;
        let bx = self.b.apply_block(&x)?;
        let radius = self.interval.radius();
        let columns: Vec<usize> = inside
            .iter()
            .enumerate()
            .filter(|&(c, &j)| {
                let theta = rr.values[j];
                let (mut num, mut den) = (0.0, 0.0);
                for (&av, &bv) in ax.col(c).iter().zip(bx.col(c)) {
                    num += (av - bv.scale(theta)).modulus();
                    den += bv.modulus();
                }
                // shift-invariant: a mix of eigenvectors from both sides of
                // the interval stays far above the gate
                num <= self.gate * radius * den
            })
            .map(|(_, &j)| j)
            .collect();
        let trace = columns.iter().map(|&j| rr.values[j]).sum();
        Ok(Accepted {
            columns,
            raw_count: inside.len(),
            trace,
            pairs: rr,
        })
    }

    fn run(&mut self, y0: DenseBlock<T>, warm: bool, contour: &crate::quadrature::Contour) -> Result<(), FeastError> {
        let mut prev_trace = None;
        let mut empty_streak = 0;
        if warm {
            if let Some(rr) = self.project(&y0)? {
                let acc = self.accept(rr)?;
                prev_trace = Some(acc.trace);
                if acc.raw_count == 0 {
                    empty_streak = 1;
                }
            }
        }

        let mut cached = None;
        let mut y = y0;
        for k in 1..=self.config.max_loops {
            if cached.is_none() {
                cached = Some(self.prepare(contour)?);
            }
            let systems = cached.as_ref().expect("prepared above");
            let t = Instant::now();
            let q = accumulate_with(systems, &y, contour)?;
            self.timings.solve_s += t.elapsed().as_secs_f64();
            if !self.config.cache_factorizations {
                cached = None;
            }
            if !q.is_finite() {
                return Err(LinalgError::InvalidStructure("filtered subspace has non-finite entries".into()).into());
            }

            let Some(rr) = self.project(&q)? else {
                self.status = FeastStatus::SubspaceBreakdown;
                self.loops = k;
                return Ok(());
            };
            self.loops = k;
            let acc = self.accept(rr)?;
            let (trace, count) = (acc.trace, acc.columns.len());
            self.trace_history.push(trace);
            self.counts.push(count);
            empty_streak = if acc.raw_count == 0 { empty_streak + 1 } else { 0 };
            // a full subspace with gated pairs in it may still shed them
            let unsettled = acc.raw_count == self.config.m0 && count < acc.raw_count;
            let converged = !unsettled
                && prev_trace
                    .is_some_and(|tp: f64| (trace - tp).abs() / trace.abs().max(self.interval.width()) <= self.tol);
            let next_y = if empty_streak >= 2 || converged || k == self.config.max_loops {
                None
            } else {
                Some(self.b.apply_block(&acc.pairs.vectors)?)
            };
            self.last = Some(acc);
            if empty_streak >= 2 {
                self.status = FeastStatus::NoEigenvaluesInInterval;
                return Ok(());
            }
            if converged {
                // only spurious values were inside
                self.status = if count == 0 {
                    FeastStatus::NoEigenvaluesInInterval
                } else {
                    FeastStatus::Converged
                };
                return Ok(());
            }
            prev_trace = Some(trace);
            if let Some(next) = next_y {
                y = next;
            }
        }
        self.status = FeastStatus::MaxLoops;
        Ok(())
    }

    fn finish(self) -> Result<FeastResult<T>, FeastError> {
        let n = self.a.n();
        let Some(acc) = self.last else {
            // breakdown before any successful projection
            return Ok(FeastResult {
                status: self.status,
                lambdas: Vec::new(),
                x: DenseBlock::zeros(n, 0),
                residuals: ResidualNorms {
                    per_pair: Vec::new(),
                    degenerate: Vec::new(),
                    max: 0.0,
                },
                loops_used: self.loops,
                trace_history: self.trace_history,
                in_interval_counts: self.counts,
                ritz_values: Vec::new(),
                ritz_vectors: DenseBlock::zeros(n, 0),
                timings: self.timings,
            });
        };
        let saturated = self.status != FeastStatus::SubspaceBreakdown && acc.raw_count == self.config.m0;
        let rr = acc.pairs;
        // compared with m0, not the current width: a subspace that lost
        // directions to truncation is not evidence that m0 is too small.
        // Every pair is a mixture then, so the gate is skipped.
        let inside: Vec<usize> = if saturated {
            (0..rr.len())
                .filter(|&j| self.interval.contains(rr.values[j]))
                .collect()
        } else {
            acc.columns
        };
        let lambdas: Vec<f64> = inside.iter().map(|&j| rr.values[j]).collect();
        let x = rr.vectors.select_columns(&inside);
        let residuals = residual_norms(self.a, self.b, &lambdas, &x)?;
        let status = if saturated {
            FeastStatus::SubspaceSaturated
        } else {
            self.status
        };
        Ok(FeastResult {
            status,
            lambdas,
            x,
            residuals,
            loops_used: self.loops,
            trace_history: self.trace_history,
            in_interval_counts: self.counts,
            ritz_values: rr.values,
            ritz_vectors: rr.vectors,
            timings: self.timings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn diag_1_to_10() -> (SymmetricOperator<f64>, SymmetricOperator<f64>) {
        let d: Vec<f64> = (1..=10).map(f64::from).collect();
        (SymmetricOperator::diagonal(&d), SymmetricOperator::identity(10))
    }

    #[test]
    fn diagonal_pencil_finds_first_three() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 3.5).unwrap();
        let out = feast_solve(&a, &b, iv, &FeastConfig::new(6), None).unwrap();
        assert_eq!(out.status, FeastStatus::Converged);
        assert_eq!(out.lambdas.len(), 3);
        for (k, l) in out.lambdas.iter().enumerate() {
            assert!((l - (k + 1) as f64).abs() <= 1e-12, "{l}");
            for i in 0..10 {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert!((out.x[(i, k)].abs() - expect).abs() <= 1e-10);
            }
        }
        assert!(out.residuals.max <= 1e-12);
        assert_eq!(out.trace_history.len(), out.loops_used);
        assert_eq!(out.ritz_values.len(), 6);
    }

    #[test]
    fn empty_interval_reports_no_eigenvalues() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(20.0, 30.0).unwrap();
        let out = feast_solve(&a, &b, iv, &FeastConfig::new(6), None).unwrap();
        assert_eq!(out.status, FeastStatus::NoEigenvaluesInInterval);
        assert!(out.lambdas.is_empty());
        assert_eq!(out.x.cols(), 0);
        assert_eq!(out.loops_used, 2);
        assert_eq!(out.in_interval_counts, vec![0, 0]);
    }

    #[test]
    fn too_small_subspace_is_flagged() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 6.5).unwrap();
        let out = feast_solve(
            &a,
            &b,
            iv,
            &FeastConfig {
                max_loops: 4,
                ..FeastConfig::new(3)
            },
            None,
        )
        .unwrap();
        assert_eq!(out.status, FeastStatus::SubspaceSaturated);
        assert_eq!(out.lambdas.len(), 3);
    }

    #[test]
    fn hermitian_two_by_two() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = SymmetricOperator::from_dense(DenseBlock::from_row_major(2, 2, &[one, i, -i, one]).unwrap()).unwrap();
        let b = SymmetricOperator::identity(2);
        let iv = SearchInterval::new(-0.5, 0.5).unwrap();
        let out = feast_solve(&a, &b, iv, &FeastConfig::hermitian(2), None).unwrap();
        assert_eq!(out.status, FeastStatus::Converged);
        assert_eq!(out.lambdas.len(), 1);
        assert!(out.lambdas[0].abs() <= 1e-12);
        assert!(out.residuals.max <= 1e-10);
    }

    #[test]
    fn class_must_match_scalar_type() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 3.5).unwrap();
        let err = feast_solve(&a, &b, iv, &FeastConfig::hermitian(6), None).unwrap_err();
        assert!(matches!(err, FeastError::InvalidConfig(_)));
        let err = feast_solve(&a.to_complex(), &b.to_complex(), iv, &FeastConfig::new(6), None).unwrap_err();
        assert!(matches!(err, FeastError::InvalidConfig(_)));
    }

    #[test]
    fn initial_block_shape_is_checked() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 3.5).unwrap();
        let y = DenseBlock::<f64>::zeros(10, 5);
        assert!(feast_solve(&a, &b, iv, &FeastConfig::new(6), Some(&y)).is_err());
        let y = DenseBlock::from_fn(10, 6, |_, _| f64::NAN);
        assert!(feast_solve(&a, &b, iv, &FeastConfig::new(6), Some(&y)).is_err());
    }

    #[test]
    fn converged_subspace_restarts_in_one_loop() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 3.5).unwrap();
        let cfg = FeastConfig::new(6);
        let first = feast_solve(&a, &b, iv, &cfg, None).unwrap();
        let y = first.warm_start(&b).unwrap();
        let second = feast_solve(&a, &b, iv, &cfg, Some(&y)).unwrap();
        assert_eq!(second.status, FeastStatus::Converged);
        assert_eq!(second.loops_used, 1);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let (a, b) = diag_1_to_10();
        let iv = SearchInterval::new(0.5, 3.5).unwrap();
        let run = |threads, cache| {
            let cfg = FeastConfig {
                threads,
                cache_factorizations: cache,
                ..FeastConfig::new(6)
            };
            feast_solve(&a, &b, iv, &cfg, None).unwrap()
        };
        let r0 = run(1, true);
        for (t, c) in [(1, true), (4, true), (3, false)] {
            let r = run(t, c);
            assert_eq!(r.lambdas, r0.lambdas);
            assert_eq!(r.x, r0.x);
            assert_eq!(r.trace_history, r0.trace_history);
            assert_eq!(r.residuals, r0.residuals);
        }
    }

    #[test]
    fn spurious_mix_of_tied_outside_pair_is_rejected() {
        // filter weights at -3 and 3 tie exactly, so the third direction
        // keeps whatever mix of them the start block had
        let a = SymmetricOperator::<f64>::diagonal(&[-3.0, 0.0, 3.0, 1.5, 20.0, 40.0]);
        let b = SymmetricOperator::identity(6);
        let iv = SearchInterval::new(-1.0, 1.0).unwrap();
        let mut ungated_spurious = 0;
        for seed in 0..20 {
            let cfg = FeastConfig {
                seed,
                ..FeastConfig::new(3)
            };
            let out = feast_solve(&a, &b, iv, &cfg, None).unwrap();
            assert_eq!(out.status, FeastStatus::Converged, "seed {seed}");
            assert_eq!(out.lambdas.len(), 1, "seed {seed}: {:?}", out.lambdas);
            assert!(out.lambdas[0].abs() <= 1e-12);
            let raw = FeastConfig {
                spurious_tol: f64::INFINITY,
                ..cfg
            };
            let out = feast_solve(&a, &b, iv, &raw, None).unwrap();
            if out.lambdas.len() > 1 {
                ungated_spurious += 1;
            }
        }
        assert!(ungated_spurious > 0, "no start block produced an in-interval mix");
    }
}
