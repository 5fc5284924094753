//! Problem assembly and the solve/sweep drivers behind the CLI.

use std::path::{Path, PathBuf};

use feast_core::feast::FeastScalar;
use feast_core::linalg::{DirectSolver, GmresSolver, InnerSolver, SymmetricOperator, TripletBuilder};
use feast_core::quadrature::SearchInterval;
use feast_core::{feast_solve_with, FeastConfig, FeastError, FeastResult, FeastStatus, Scalar, SymmetryClass};
use num_complex::Complex64;

use crate::error::{HarnessError, Result};
use crate::generators::{gen_laplacian_fd, gen_laplacian_fem};
use crate::mtx::load_matrix_market;
use crate::report::{ErrorReport, ReportContext, RunReport, SweepReport, SweepStepReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Fd,
    Fem,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Fd => "fd",
            GeneratorKind::Fem => "fem",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    /// `B = I` when `b` is absent.
    Files {
        a: PathBuf,
        b: Option<PathBuf>,
    },
    Generator {
        kind: GeneratorKind,
        nx: usize,
        ny: usize,
    },
    /// `diag(1, ..., 10)` with `B = I`.
    Demo,
}

impl ProblemSource {
    fn describe(&self) -> String {
        match self {
            ProblemSource::Files { a, b } => match b {
                Some(b) => format!("files:{},{}", a.display(), b.display()),
                None => format!("files:{}", a.display()),
            },
            ProblemSource::Generator { kind, nx, ny } => format!("generator:{}:{nx}x{ny}", kind.as_str()),
            ProblemSource::Demo => "demo".to_owned(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub source: ProblemSource,
    pub interval: SearchInterval,
    pub config: FeastConfig,
    /// Solve the shifted systems with GMRES to this relative residual
    /// instead of by factorization.
    pub inner_tol: Option<f64>,
}

impl ProblemSpec {
    /// The built-in demo: eigenvalues 3, 4, 5, 6 of `diag(1, ..., 10)`.
    pub fn demo() -> Self {
        Self {
            source: ProblemSource::Demo,
            interval: SearchInterval::new(2.5, 6.5).expect("valid interval"),
            config: FeastConfig::new(6),
            inner_tol: None,
        }
    }
}

pub struct Pencil<T> {
    pub a: SymmetricOperator<T>,
    pub b: SymmetricOperator<T>,
    pub source: String,
}

fn promote<T: Scalar>(op: SymmetricOperator<f64>) -> Result<SymmetricOperator<T>> {
    let n = op.n();
    let mut t = TripletBuilder::with_capacity(n, n, op.nnz());
    op.for_each_entry(|i, j, v| t.push(i, j, T::from_real(v)));
    Ok(SymmetricOperator::from_csr(t.build())?)
}

pub fn load_pencil<T: Scalar>(source: &ProblemSource) -> Result<Pencil<T>> {
    let (a, b) = match source {
        ProblemSource::Files { a, b } => {
            let a = load_matrix_market::<T>(a)?;
            let b = match b {
                Some(path) => {
                    let b = load_matrix_market::<T>(path)?;
                    if b.n() != a.n() {
                        return Err(HarnessError::Input(format!(
                            "A is {0}x{0} but B is {1}x{1}",
                            a.n(),
                            b.n()
                        )));
                    }
                    b
                }
                None => SymmetricOperator::identity(a.n()),
            };
            (a, b)
        }
        ProblemSource::Generator { kind, nx, ny } => {
            let (a, b) = match kind {
                GeneratorKind::Fd => gen_laplacian_fd(*nx, *ny)?,
                GeneratorKind::Fem => gen_laplacian_fem(*nx, *ny)?,
            };
            (promote(a)?, promote(b)?)
        }
        ProblemSource::Demo => {
            let d: Vec<f64> = (1..=10).map(f64::from).collect();
            (SymmetricOperator::diagonal(&d), SymmetricOperator::identity(d.len()))
        }
    };
    Ok(Pencil {
        a,
        b,
        source: source.describe(),
    })
}

/// Runs FEAST with the inner solver selected by `inner_tol`.
pub fn solve_pencil<T: FeastScalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    spec: &ProblemSpec,
    initial_y: Option<&feast_core::linalg::DenseBlock<T>>,
) -> std::result::Result<FeastResult<T>, FeastError> {
    let solver: Box<dyn InnerSolver<T>> = match spec.inner_tol {
        Some(tol) => Box::new(GmresSolver::new(tol)),
        None => Box::new(DirectSolver::default()),
    };
    feast_solve_with(a, b, spec.interval, &spec.config, initial_y, solver.as_ref())
}

fn validate_inner_tol(spec: &ProblemSpec) -> Result<()> {
    match spec.inner_tol {
        Some(t) if !(t.is_finite() && t > 0.0 && t < 1.0) => Err(HarnessError::Input(format!(
            "inner tolerance must lie in (0, 1), got {t}"
        ))),
        _ => Ok(()),
    }
}

fn report_for<T: Scalar>(
    spec: &ProblemSpec,
    a: &SymmetricOperator<T>,
    source: String,
    result: &FeastResult<T>,
) -> RunReport {
    let ctx = ReportContext {
        n: a.n(),
        nnz: a.nnz(),
        interval: (spec.interval.lambda_min(), spec.interval.lambda_max()),
        config: &spec.config,
        inner_tol: spec.inner_tol,
        source,
    };
    RunReport::new(ctx, result)
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: FeastStatus,
    pub report: RunReport,
}

pub fn run_solve(spec: &ProblemSpec) -> Result<SolveOutcome> {
    match spec.config.class {
        SymmetryClass::RealSymmetric => run_solve_typed::<f64>(spec),
        SymmetryClass::Hermitian => run_solve_typed::<Complex64>(spec),
    }
}

fn run_solve_typed<T: FeastScalar>(spec: &ProblemSpec) -> Result<SolveOutcome> {
    validate_inner_tol(spec)?;
    let p = load_pencil::<T>(&spec.source)?;
    let result = solve_pencil(&p.a, &p.b, spec, None)?;
    Ok(SolveOutcome {
        status: result.status,
        report: report_for(spec, &p.a, p.source, &result),
    })
}

pub struct SweepStep<T> {
    pub t: f64,
    /// Whether the step started from the previous step's subspace.
    pub warm: bool,
    pub outcome: std::result::Result<FeastResult<T>, FeastError>,
}

/// Solves `(A + t S) x = lambda B x` for each `t` in order. Each step starts
/// from `B X` of the previous step's full Ritz basis; after a failed step,
/// a breakdown, or a truncated basis the next step starts cold.
pub fn sweep<T: FeastScalar>(
    a: &SymmetricOperator<T>,
    b: &SymmetricOperator<T>,
    s: &SymmetricOperator<T>,
    steps: &[f64],
    spec: &ProblemSpec,
) -> Result<Vec<SweepStep<T>>> {
    if s.n() != a.n() || b.n() != a.n() {
        return Err(HarnessError::Input(format!(
            "sweep operators disagree in order: A {}, B {}, S {}",
            a.n(),
            b.n(),
            s.n()
        )));
    }
    if let Some(t) = steps.iter().find(|t| !t.is_finite()) {
        return Err(HarnessError::Input(format!("sweep parameter {t} is not finite")));
    }
    validate_inner_tol(spec)?;
    let mut out = Vec::with_capacity(steps.len());
    let mut warm = None;
    for &t in steps {
        let at = a.add_scaled(s, t)?;
        let outcome = solve_pencil(&at, b, spec, warm.as_ref());
        let was_warm = warm.is_some();
        warm = match &outcome {
            Ok(r) if r.status != FeastStatus::SubspaceBreakdown && r.ritz_vectors.cols() == spec.config.m0 => {
                r.warm_start(b).ok()
            }
            _ => None,
        };
        out.push(SweepStep {
            t,
            warm: was_warm,
            outcome,
        });
    }
    Ok(out)
}

pub fn run_sweep(spec: &ProblemSpec, s_path: &Path, steps: &[f64]) -> Result<SweepReport> {
    match spec.config.class {
        SymmetryClass::RealSymmetric => run_sweep_typed::<f64>(spec, s_path, steps),
        SymmetryClass::Hermitian => run_sweep_typed::<Complex64>(spec, s_path, steps),
    }
}

fn run_sweep_typed<T: FeastScalar>(spec: &ProblemSpec, s_path: &Path, steps: &[f64]) -> Result<SweepReport> {
    let p = load_pencil::<T>(&spec.source)?;
    let s = load_matrix_market::<T>(s_path)?;
    let results = sweep(&p.a, &p.b, &s, steps, spec)?;
    let steps = results
        .into_iter()
        .map(|step| {
            let (report, error) = match step.outcome {
                Ok(r) => {
                    // nnz of the perturbed operator
                    let at = p.a.add_scaled(&s, step.t).map(|m| m.nnz()).unwrap_or(p.a.nnz());
                    let mut rep = report_for(spec, &p.a, format!("{}+t*{}", p.source, s_path.display()), &r);
                    rep.nnz = at;
                    (Some(rep), None)
                }
                Err(e) => (None, Some(ErrorReport::from(&HarnessError::from(e)))),
            };
            SweepStepReport {
                t: step.t,
                warm_start: step.warm,
                report,
                error,
            }
        })
        .collect();
    Ok(SweepReport { steps })
}

/// Parses `"t1,t2,..."`.
pub fn parse_steps(text: &str) -> Result<Vec<f64>> {
    let steps = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|t| t.is_finite())
                .ok_or_else(|| HarnessError::Input(format!("bad sweep parameter {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if steps.is_empty() {
        return Err(HarnessError::Input("no sweep parameters given".into()));
    }
    Ok(steps)
}
