//! `expectile` command-line tool: compute expectiles, dump iteration traces
//! and map curves, and benchmark the solvers on seeded synthetic samples.

pub mod error;
pub mod ingest;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expectile_core::compute::{agreement_scale, solve};
use expectile_core::maps::{phi_alpha, psi_alpha};
use expectile_core::sample::map_curve;
use expectile_core::{
    synth, AlphaLevel, Distribution, DistributionOracle, EmpiricalDistribution, ExpectileResult,
    Method, SolverConfig, X0Policy,
};
use serde::Serialize;

pub use error::CliError;
use ingest::{ingest, Source};
use output::{sig15, write_records, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Cross-method agreement threshold, relative to `1 + |value| + |mean|`.
pub const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "expectile",
    version,
    about = "Expectiles by fixed-point iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute expectiles for each level and method.
    Compute(RunArgs),
    /// Emit iteration traces (iteration, x, residual) for plotting.
    Trace(RunArgs),
    /// Compare all methods on a seeded synthetic sample.
    Bench(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    OneSided,
    TwoSided,
    SampleOneSided,
    SampleTwoSided,
    Bisection,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::OneSided => vec![Method::OneSided],
            MethodArg::TwoSided => vec![Method::TwoSided],
            MethodArg::SampleOneSided => vec![Method::SampleOneSided],
            MethodArg::SampleTwoSided => vec![Method::SampleTwoSided],
            MethodArg::Bisection => vec![Method::Bisection],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Data file: one number per line or comma-separated, optional header.
    #[arg(long, conflicts_with = "dist", required_unless_present = "dist")]
    pub input: Option<PathBuf>,
    /// Analytic law: normal:MU,SIGMA | uniform:A,B | point:C.
    #[arg(long)]
    pub dist: Option<String>,
    /// Comma-separated levels in (0, 1). `bench` defaults to 0.1,0.2,...,0.9.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long, value_enum, default_value = "two-sided")]
    pub method: MethodArg,
    /// Starting point: mean, quantile (lower order statistic) or a number.
    #[arg(long, default_value = "mean", allow_negative_numbers = true)]
    pub x0: X0Policy,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for synthetic samples (`bench`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample size for synthetic samples (`bench`).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// `trace`: also emit the sampled map curve psi(x) - x and phi(x).
    #[arg(long)]
    pub curve: bool,
    #[arg(long = "curve-points", default_value_t = 201)]
    pub curve_points: usize,
}

pub const DEFAULT_SEED: u64 = 42;

impl RunArgs {
    fn source(&self) -> Source<'_> {
        match (&self.input, &self.dist) {
            (Some(p), _) => Source::File(p),
            (None, Some(s)) => Source::Spec(s),
            (None, None) => unreachable!("clap requires one of --input/--dist"),
        }
    }

    fn alphas(&self, default: &[f64]) -> Result<Vec<AlphaLevel>, CliError> {
        let raw = if self.alpha.is_empty() {
            default
        } else {
            &self.alpha
        };
        if raw.is_empty() {
            return Err(CliError::Usage("--alpha is required".into()));
        }
        Ok(raw
            .iter()
            .map(|&a| AlphaLevel::new(a))
            .collect::<Result<_, _>>()?)
    }

    fn config(&self, record_trace: bool) -> Result<SolverConfig, CliError> {
        Ok(SolverConfig::new(self.tol, self.max_iter, record_trace)?)
    }
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub alpha: f64,
    pub method: Method,
    pub value: f64,
    pub iterations: usize,
    pub termination: String,
    pub foc_residual: f64,
    pub x0: f64,
    pub x0_policy: String,
}

impl RunRecord {
    fn new(res: &ExpectileResult, x0: f64, policy: X0Policy) -> Self {
        RunRecord {
            alpha: res.alpha.value(),
            method: res.method,
            value: sig15(res.value),
            iterations: res.iterations,
            termination: res.termination.to_string(),
            foc_residual: sig15(res.foc_residual),
            x0: sig15(x0),
            x0_policy: policy_name(policy),
        }
    }
}

fn policy_name(p: X0Policy) -> String {
    match p {
        X0Policy::Mean => "mean".into(),
        X0Policy::Quantile => "quantile_lower_order_statistic".into(),
        X0Policy::Explicit(_) => "explicit".into(),
    }
}

/// Methods applicable to the distribution; sample methods are dropped from
/// `all` for analytic laws and rejected when asked for explicitly.
fn methods_for(arg: MethodArg, d: &Distribution) -> Result<Vec<Method>, CliError> {
    let methods = arg.methods();
    if d.as_empirical().is_some() {
        return Ok(methods);
    }
    if arg == MethodArg::All {
        return Ok(methods.into_iter().filter(|m| !m.needs_sample()).collect());
    }
    match methods.iter().find(|m| m.needs_sample()) {
        Some(m) => Err(CliError::Usage(format!(
            "method {m} needs sample data (--input), not --dist"
        ))),
        None => Ok(methods),
    }
}

struct Solved {
    alpha: AlphaLevel,
    x0: f64,
    results: Vec<ExpectileResult>,
}

fn solve_all(
    args: &RunArgs,
    d: &Distribution,
    alphas: &[AlphaLevel],
    methods: &[Method],
    trace: bool,
) -> Result<Vec<Solved>, CliError> {
    let cfg = args.config(trace)?;
    alphas
        .iter()
        .map(|&a| {
            let x0 = args.x0.resolve(a, d);
            let results = methods
                .iter()
                .map(|&m| solve(m, a, d, x0, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Solved {
                alpha: a,
                x0,
                results,
            })
        })
        .collect()
}

/// Largest pairwise spread between methods, relative to the agreement scale.
fn spread(results: &[ExpectileResult], mean: f64) -> f64 {
    let (lo, hi) = results
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), r| {
            (l.min(r.value), h.max(r.value))
        });
    if results.len() < 2 {
        return 0.0;
    }
    (hi - lo) / agreement_scale(hi.abs().max(lo.abs()), mean)
}

fn report_convergence(solved: &[Solved], mean: f64, err: &mut dyn Write) -> bool {
    let mut ok = true;
    for s in solved {
        for r in s.results.iter().filter(|r| !r.converged()) {
            let _ = writeln!(
                err,
                "alpha={} method={}: hit max iterations ({})",
                s.alpha, r.method, r.iterations
            );
            ok = false;
        }
        let sp = spread(&s.results, mean);
        if sp > AGREEMENT_TOL {
            let _ = writeln!(
                err,
                "alpha={}: methods disagree (relative spread {sp:.3e})",
                s.alpha
            );
            ok = false;
        }
    }
    ok
}

pub fn cmd_compute(
    args: &RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let d = ingest(args.source())?;
    let alphas = args.alphas(&[])?;
    let methods = methods_for(args.method, &d)?;
    let solved = solve_all(args, &d, &alphas, &methods, false)?;
    let records: Vec<RunRecord> = solved
        .iter()
        .flat_map(|s| s.results.iter().map(|r| RunRecord::new(r, s.x0, args.x0)))
        .collect();
    write_records(out, args.format, &records)?;
    Ok(if report_convergence(&solved, d.mean(), err) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

#[derive(Debug, Serialize)]
pub struct TraceRow {
    pub alpha: f64,
    pub method: Method,
    pub iteration: usize,
    pub x: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub x: f64,
    pub psi_minus_x: f64,
    pub phi: f64,
}

#[derive(Debug, Serialize)]
struct TraceRecord {
    alpha: f64,
    method: Method,
    x0_policy: String,
    value: f64,
    termination: String,
    rows: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<Vec<CurveRow>>,
}

fn curve_rows(a: AlphaLevel, d: &Distribution, points: usize) -> Vec<CurveRow> {
    match d {
        Distribution::Empirical(s) => map_curve(a, s, points)
            .into_iter()
            .map(|p| CurveRow {
                alpha: a.value(),
                x: sig15(p.x),
                psi_minus_x: sig15(p.psi_minus_x),
                phi: sig15(p.phi),
            })
            .collect(),
        Distribution::Analytic(f) => {
            let (lo, hi) = (f.quantile(0.001), f.quantile(0.999));
            let (lo, hi) = if hi > lo {
                (lo, hi)
            } else {
                (lo - 1.0, hi + 1.0)
            };
            let points = points.max(2);
            (0..points)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                    CurveRow {
                        alpha: a.value(),
                        x: sig15(x),
                        psi_minus_x: sig15(psi_alpha(a, x, d) - x),
                        phi: sig15(phi_alpha(a, x, d)),
                    }
                })
                .collect()
        }
    }
}

pub fn cmd_trace(
    args: &RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let d = ingest(args.source())?;
    let alphas = args.alphas(&[])?;
    let methods = methods_for(args.method, &d)?;
    let solved = solve_all(args, &d, &alphas, &methods, true)?;
    let mut traces = Vec::new();
    for s in &solved {
        for r in &s.results {
            let t = r.trace.as_ref().expect("trace requested");
            let rows = t
                .iterates
                .iter()
                .zip(&t.residuals)
                .enumerate()
                .map(|(i, (&x, &h))| TraceRow {
                    alpha: s.alpha.value(),
                    method: r.method,
                    iteration: i,
                    x: sig15(x),
                    residual: sig15(h),
                })
                .collect();
            traces.push(TraceRecord {
                alpha: s.alpha.value(),
                method: r.method,
                x0_policy: policy_name(args.x0),
                value: sig15(r.value),
                termination: r.termination.to_string(),
                rows,
                curve: None,
            });
        }
    }
    match args.format {
        Format::Json => {
            if args.curve {
                for t in &mut traces {
                    let a = AlphaLevel::new(t.alpha)?;
                    t.curve = Some(curve_rows(a, &d, args.curve_points));
                }
            }
            output::write_json(out, &traces)?;
        }
        Format::Csv if args.curve => {
            let rows: Vec<CurveRow> = solved
                .iter()
                .flat_map(|s| curve_rows(s.alpha, &d, args.curve_points))
                .collect();
            output::write_csv(out, &rows)?;
        }
        Format::Csv => {
            let rows: Vec<&TraceRow> = traces.iter().flat_map(|t| &t.rows).collect();
            output::write_csv(out, &rows)?;
        }
    }
    Ok(if report_convergence(&solved, d.mean(), err) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

#[derive(Debug, Serialize)]
pub struct BenchRecord {
    pub alpha: f64,
    pub method: Method,
    pub value: f64,
    pub iterations: usize,
    pub termination: String,
    /// Difference to the bisection reference.
    pub delta: f64,
    pub n: usize,
    pub seed: Option<u64>,
}

const BENCH_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub fn cmd_bench(
    args: &RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let (sample, seed) = match args.source() {
        Source::Spec(spec) => {
            let family = ingest::parse_spec(spec)?;
            let seed = args.seed.unwrap_or(DEFAULT_SEED);
            if args.n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            (
                EmpiricalDistribution::new(&synth::draw(&family, args.n, seed))?,
                Some(seed),
            )
        }
        Source::File(path) => (ingest::read_sample(path)?, None),
    };
    let n = sample.count();
    let d: Distribution = sample.into();
    let alphas = args.alphas(&BENCH_GRID)?;
    let solved = solve_all(args, &d, &alphas, &Method::ALL, false)?;

    let mut records = Vec::new();
    for s in &solved {
        let reference = s
            .results
            .iter()
            .find(|r| r.method == Method::Bisection)
            .map(|r| r.value)
            .expect("bisection is part of every bench run");
        for r in &s.results {
            records.push(BenchRecord {
                alpha: s.alpha.value(),
                method: r.method,
                value: sig15(r.value),
                iterations: r.iterations,
                termination: r.termination.to_string(),
                delta: sig15(r.value - reference),
                n,
                seed,
            });
        }
    }
    write_records(out, args.format, &records)?;

    let mut ok = report_convergence(&solved, d.mean(), err);
    // Expectiles are nondecreasing in alpha, for every method.
    let mut order: Vec<&Solved> = solved.iter().collect();
    order.sort_by(|p, q| p.alpha.value().total_cmp(&q.alpha.value()));
    for pair in order.windows(2) {
        for (p, q) in pair[0].results.iter().zip(&pair[1].results) {
            let slack = AGREEMENT_TOL * agreement_scale(p.value, d.mean());
            if q.value < p.value - slack {
                let _ = writeln!(
                    err,
                    "{}: value decreases from alpha={} to alpha={}",
                    p.method, pair[0].alpha, pair[1].alpha
                );
                ok = false;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a, out, err),
        Command::Trace(a) => cmd_trace(a, out, err),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
