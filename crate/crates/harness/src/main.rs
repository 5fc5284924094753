use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use feast_core::feast::{DEFAULT_MAX_LOOPS, DEFAULT_N_E, DEFAULT_SEED, DEFAULT_SPURIOUS_TOL, DEFAULT_TRACE_TOL};
use feast_core::quadrature::SearchInterval;
use feast_core::{FeastConfig, FeastStatus, Scalar, SymmetryClass};
use feast_harness::generators::{gen_laplacian_fd, gen_laplacian_fem, replicate};
use feast_harness::mtx::{load_matrix_market, write_matrix_market};
use feast_harness::report::{status_exit_code, ErrorReport, EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR};
use feast_harness::run::{run_solve, run_sweep, ProblemSource, ProblemSpec};
use feast_harness::{HarnessError, Result};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "feast",
    version,
    about = "Interval eigensolver for symmetric and Hermitian pencils"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenpairs of A x = lambda B x in [lmin, lmax].
    Solve(SolveArgs),
    /// Write a test pencil.
    Generate(GenerateArgs),
    /// Block-diagonal copies of a pencil.
    Replicate(ReplicateArgs),
    /// Solve (A + t S) x = lambda B x for a list of t, warm starting each step.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Real,
    Hermitian,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Fd,
    Fem,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    lmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lmax: Option<f64>,
    #[arg(long)]
    m0: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_N_E)]
    ne: usize,
    #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
    trace_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_LOOPS)]
    max_loops: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ClassArg::Real)]
    class: ClassArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Residual gate for in-interval Ritz pairs, relative to the interval
    /// radius; `inf` disables it.
    #[arg(long, default_value_t = DEFAULT_SPURIOUS_TOL)]
    spurious_tol: f64,
    /// Solve shifted systems with GMRES to this relative residual.
    #[arg(long)]
    inner_tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the eigenvalue table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, required_unless_present = "demo")]
    a: Option<PathBuf>,
    /// Built-in diagonal problem; interval and m0 default to [2.5, 6.5] and 6.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    demo: bool,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    nx: usize,
    #[arg(long)]
    ny: usize,
    #[arg(long)]
    out_a: PathBuf,
    #[arg(long)]
    out_b: Option<PathBuf>,
}

#[derive(Args)]
struct ReplicateArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ClassArg::Real)]
    class: ClassArg,
    #[arg(long)]
    out_a: PathBuf,
    #[arg(long)]
    out_b: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    s: PathBuf,
    /// Comma-separated parameter values.
    #[arg(long, allow_hyphen_values = true)]
    steps: String,
    #[command(flatten)]
    flags: SolverFlags,
}

impl From<ClassArg> for SymmetryClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Real => SymmetryClass::RealSymmetric,
            ClassArg::Hermitian => SymmetryClass::Hermitian,
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| HarnessError::Input(format!("--{flag} is required")))
}

fn build_spec(source: ProblemSource, f: &SolverFlags, demo: bool) -> Result<ProblemSpec> {
    let defaults = ProblemSpec::demo();
    let (lmin, lmax, m0) = if demo {
        (
            f.lmin.unwrap_or(defaults.interval.lambda_min()),
            f.lmax.unwrap_or(defaults.interval.lambda_max()),
            f.m0.unwrap_or(defaults.config.m0),
        )
    } else {
        (
            required(f.lmin, "lmin")?,
            required(f.lmax, "lmax")?,
            required(f.m0, "m0")?,
        )
    };
    let config = FeastConfig {
        m0,
        n_e: f.ne,
        trace_tol: f.trace_tol,
        max_loops: f.max_loops,
        seed: f.seed,
        class: f.class.into(),
        threads: f.threads,
        spurious_tol: f.spurious_tol,
        ..FeastConfig::new(m0)
    };
    Ok(ProblemSpec {
        source,
        interval: SearchInterval::new(lmin, lmax)?,
        config,
        inner_tol: f.inner_tol,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(out: Option<&Path>, json: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, json),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> Result<i32> {
    let source = if args.demo {
        ProblemSource::Demo
    } else {
        ProblemSource::Files {
            a: required(args.a, "a")?,
            b: args.flags.b.clone(),
        }
    };
    let spec = build_spec(source, &args.flags, args.demo)?;
    let out = run_solve(&spec)?;
    emit(args.flags.out.as_deref(), &out.report.to_json())?;
    if let Some(csv) = &args.flags.csv {
        write_file(csv, &out.report.to_csv())?;
    }
    Ok(status_exit_code(out.status))
}

fn generate(args: GenerateArgs) -> Result<i32> {
    let (a, b) = match args.kind {
        KindArg::Fd => gen_laplacian_fd(args.nx, args.ny)?,
        KindArg::Fem => gen_laplacian_fem(args.nx, args.ny)?,
    };
    write_matrix_market(&args.out_a, &a)?;
    if let Some(p) = &args.out_b {
        write_matrix_market(p, &b)?;
    }
    Ok(0)
}

fn replicate_typed<T: Scalar>(args: &ReplicateArgs) -> Result<()> {
    let a = load_matrix_market::<T>(&args.a)?;
    let b = match &args.b {
        Some(p) => load_matrix_market::<T>(p)?,
        None => feast_core::linalg::SymmetricOperator::identity(a.n()),
    };
    let (ak, bk) = replicate(&a, &b, args.k)?;
    write_matrix_market(&args.out_a, &ak)?;
    if let Some(p) = &args.out_b {
        write_matrix_market(p, &bk)?;
    }
    Ok(())
}

fn replicate_cmd(args: ReplicateArgs) -> Result<i32> {
    match args.class {
        ClassArg::Real => replicate_typed::<f64>(&args)?,
        ClassArg::Hermitian => replicate_typed::<Complex64>(&args)?,
    }
    Ok(0)
}

fn sweep(args: SweepArgs) -> Result<i32> {
    let steps = feast_harness::run::parse_steps(&args.steps)?;
    let source = ProblemSource::Files {
        a: args.a.clone(),
        b: args.flags.b.clone(),
    };
    let spec = build_spec(source, &args.flags, false)?;
    let report = run_sweep(&spec, &args.s, &steps)?;
    emit(args.flags.out.as_deref(), &report.to_json())?;
    if let Some(csv) = &args.flags.csv {
        let mut text = String::from("step,t,loops,status,index,eigenvalue,residual\n");
        for (k, st) in report.steps.iter().enumerate() {
            if let Some(r) = &st.report {
                for (i, (l, res)) in r.eigenvalues.iter().zip(&r.residuals).enumerate() {
                    text.push_str(&format!("{k},{:e},{},{},{i},{l:e},{res:e}\n", st.t, r.loops, r.status));
                }
            }
        }
        write_file(csv, &text)?;
    }
    // worst step decides the exit code
    let code = report
        .steps
        .iter()
        .map(|st| match (&st.report, &st.error) {
            (Some(r), _) => status_exit_code(parse_status(&r.status)),
            (None, Some(e)) if e.kind == "numerical" => EXIT_NUMERICAL_ERROR,
            _ => EXIT_INPUT_ERROR,
        })
        .max()
        .unwrap_or(0);
    Ok(code)
}

fn parse_status(s: &str) -> FeastStatus {
    [
        FeastStatus::Converged,
        FeastStatus::MaxLoops,
        FeastStatus::NoEigenvaluesInInterval,
        FeastStatus::SubspaceSaturated,
        FeastStatus::SubspaceBreakdown,
    ]
    .into_iter()
    .find(|st| st.as_str() == s)
    .unwrap_or(FeastStatus::SubspaceBreakdown)
}

fn main() -> ExitCode {
    // clap's own exit code 2 would collide with the max-loops code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = ErrorReport {
                kind: "input".into(),
                message: e.kind().to_string(),
            };
            println!("{}", err.to_json());
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate(a),
        Command::Replicate(a) => replicate_cmd(a),
        Command::Sweep(a) => sweep(a),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            println!("{}", ErrorReport::from(&e).to_json());
            if e.is_numerical() {
                EXIT_NUMERICAL_ERROR
            } else {
                EXIT_INPUT_ERROR
            }
        }
    };
    ExitCode::from(code as u8)
}
