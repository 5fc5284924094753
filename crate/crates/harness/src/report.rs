//! JSON run reports. The layout is described by `schema/run_report.schema.json`.

use feast_core::{FeastConfig, FeastResult, FeastStatus};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportTimings {
    pub factorize_s: f64,
    pub solve_s: f64,
    pub reduce_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    /// Stored entries of `A`.
    pub nnz: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub m0: usize,
    pub ne: usize,
    pub loops: usize,
    pub status: String,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub trace_history: Vec<f64>,
    pub in_interval_counts: Vec<usize>,
    pub timings: ReportTimings,
    pub seed: u64,
    pub class: String,
    pub trace_tol: f64,
    /// `null` when the gate is disabled.
    pub spurious_tol: Option<f64>,
    pub max_loops: usize,
    pub threads: usize,
    /// Relative tolerance of the iterative inner solver; absent for direct
    /// solves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_tol: Option<f64>,
    /// Where the pencil came from.
    pub source: String,
    /// Indices of pairs whose residual is absolute because `|A x|_1` vanished.
    pub degenerate_residuals: Vec<usize>,
}

pub struct ReportContext<'a> {
    pub n: usize,
    pub nnz: usize,
    pub interval: (f64, f64),
    pub config: &'a FeastConfig,
    pub inner_tol: Option<f64>,
    pub source: String,
}

impl RunReport {
    pub fn new<T>(ctx: ReportContext<'_>, result: &FeastResult<T>) -> Self {
        let t = result.timings;
        Self {
            n: ctx.n,
            nnz: ctx.nnz,
            lambda_min: ctx.interval.0,
            lambda_max: ctx.interval.1,
            m0: ctx.config.m0,
            ne: ctx.config.n_e,
            loops: result.loops_used,
            status: result.status.as_str().to_owned(),
            eigenvalues: result.lambdas.clone(),
            residuals: result.residuals.per_pair.clone(),
            max_residual: result.residuals.max,
            trace_history: result.trace_history.clone(),
            in_interval_counts: result.in_interval_counts.clone(),
            timings: ReportTimings {
                factorize_s: t.factorize_s,
                solve_s: t.solve_s,
                reduce_s: t.reduce_s,
                total_s: t.total_s,
            },
            seed: ctx.config.seed,
            class: ctx.config.class.to_string(),
            trace_tol: ctx.config.trace_tol,
            spurious_tol: ctx.config.spurious_tol.is_finite().then_some(ctx.config.spurious_tol),
            max_loops: ctx.config.max_loops,
            threads: ctx.config.threads,
            inner_tol: ctx.inner_tol,
            source: ctx.source,
            degenerate_residuals: result
                .residuals
                .degenerate
                .iter()
                .enumerate()
                .filter_map(|(i, &d)| d.then_some(i))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serializable")
    }

    /// `index,eigenvalue,residual` table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,residual\n");
        for (i, (l, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("{i},{l:e},{r:e}\n"));
        }
        out
    }
}

/// Process exit code for a finished run.
pub fn status_exit_code(status: FeastStatus) -> i32 {
    match status {
        FeastStatus::Converged | FeastStatus::NoEigenvaluesInInterval => 0,
        FeastStatus::MaxLoops => 2,
        FeastStatus::SubspaceSaturated => 3,
        FeastStatus::SubspaceBreakdown => 5,
    }
}

pub const EXIT_INPUT_ERROR: i32 = 4;
pub const EXIT_NUMERICAL_ERROR: i32 = 5;

/// The schema shipped with the crate.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

/// Machine-readable failure, printed on stdout by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

impl From<&HarnessError> for ErrorReport {
    fn from(e: &HarnessError) -> Self {
        Self {
            kind: e.kind().to_owned(),
            message: e.to_string(),
        }
    }
}

impl ErrorReport {
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStepReport {
    pub t: f64,
    pub warm_start: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<RunReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub steps: Vec<SweepStepReport>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serializable")
    }
}
