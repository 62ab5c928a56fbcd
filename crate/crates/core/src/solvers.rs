//! Iterative expectile solvers over any [`DistributionOracle`].
//!
//! Every solver returns an [`ExpectileResult`]; running out of iterations is
//! reported through [`Termination::MaxIterationsHit`] rather than as an error,
//! so that the trace of a stalled run is still available.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaLevel;
use crate::distribution::{negate, DistributionOracle};
use crate::error::{ExpectileError, Result};
use crate::maps::{h_alpha, phi_alpha, psi_alpha};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative step threshold; also bounds the residual via `tol * (1 + |mean|)`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub record_trace: bool,
}

impl SolverConfig {
    pub fn new(tolerance: f64, max_iterations: usize, record_trace: bool) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(ExpectileError::InvalidConfig(format!(
                "tolerance must be positive and finite, got {tolerance}"
            )));
        }
        if max_iterations == 0 {
            return Err(ExpectileError::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(SolverConfig {
            tolerance,
            max_iterations,
            record_trace,
        })
    }

    pub fn with_trace(mut self, record_trace: bool) -> Self {
        self.record_trace = record_trace;
        self
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: 10_000,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    OneSided,
    TwoSided,
    Bisection,
    SampleOneSided,
    SampleTwoSided,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::OneSided,
        Method::TwoSided,
        Method::Bisection,
        Method::SampleOneSided,
        Method::SampleTwoSided,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::OneSided => "one_sided",
            Method::TwoSided => "two_sided",
            Method::Bisection => "bisection",
            Method::SampleOneSided => "sample_one_sided",
            Method::SampleTwoSided => "sample_two_sided",
        }
    }

    pub fn needs_sample(self) -> bool {
        matches!(self, Method::SampleOneSided | Method::SampleTwoSided)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ToleranceMet,
    FiniteTermination,
    MaxIterationsHit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ToleranceMet => "tolerance_met",
            Termination::FiniteTermination => "finite_termination",
            Termination::MaxIterationsHit => "max_iterations_hit",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Iterates `x_0, x_1, ...` with the first-order residual at each one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub method: Method,
    pub iterates: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl IterationTrace {
    pub fn new(method: Method) -> Self {
        IterationTrace {
            method,
            iterates: Vec::new(),
            residuals: Vec::new(),
        }
    }

    pub fn push(&mut self, x: f64, residual: f64) {
        self.iterates.push(x);
        self.residuals.push(residual);
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    /// Map `x -> -x` on iterates and residuals. Used when a run on `-X` at
    /// level `1 - a` is reported as a run on `X` at level `a`.
    pub(crate) fn reflected(mut self) -> Self {
        self.iterates.iter_mut().for_each(|x| *x = -*x);
        self.residuals.iter_mut().for_each(|r| *r = -*r);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectileResult {
    pub value: f64,
    pub alpha: AlphaLevel,
    pub method: Method,
    pub iterations: usize,
    pub termination: Termination,
    pub foc_residual: f64,
    pub trace: Option<IterationTrace>,
}

impl ExpectileResult {
    pub fn converged(&self) -> bool {
        self.termination != Termination::MaxIterationsHit
    }
}

/// Records iterates when tracing is on; keeps the iteration count either way.
pub(crate) struct Recorder {
    trace: Option<IterationTrace>,
}

impl Recorder {
    pub(crate) fn new(method: Method, cfg: &SolverConfig) -> Self {
        Recorder {
            trace: cfg.record_trace.then(|| IterationTrace::new(method)),
        }
    }

    pub(crate) fn push(&mut self, x: f64, residual: f64) {
        if let Some(t) = self.trace.as_mut() {
            t.push(x, residual);
        }
    }

    pub(crate) fn finish(
        self,
        value: f64,
        alpha: AlphaLevel,
        method: Method,
        iterations: usize,
        termination: Termination,
        foc_residual: f64,
    ) -> ExpectileResult {
        ExpectileResult {
            value,
            alpha,
            method,
            iterations,
            termination,
            foc_residual,
            trace: self.trace,
        }
    }
}

pub(crate) fn check_start(x0: f64) -> Result<()> {
    if x0.is_finite() {
        Ok(())
    } else {
        Err(ExpectileError::InvalidStart(x0))
    }
}

/// `a = 1/2`: every map is the constant `E X`.
fn mean_result<D: DistributionOracle + ?Sized>(
    alpha: AlphaLevel,
    d: &D,
    x0: f64,
    method: Method,
    cfg: &SolverConfig,
) -> ExpectileResult {
    let mut rec = Recorder::new(method, cfg);
    rec.push(x0, h_alpha(alpha, x0, d));
    let mean = d.mean();
    let r = h_alpha(alpha, mean, d);
    rec.push(mean, r);
    rec.finish(mean, alpha, method, 1, Termination::ToleranceMet, r)
}

/// Plain fixed-point loop with the dual stopping rule: relative step below
/// `tol` and residual below `tol * (1 + |mean|)`.
fn fixed_point<D, F>(
    alpha: AlphaLevel,
    d: &D,
    x0: f64,
    cfg: &SolverConfig,
    method: Method,
    descending: bool,
    map: F,
) -> ExpectileResult
where
    D: DistributionOracle + ?Sized,
    F: Fn(f64) -> f64,
{
    let mut rec = Recorder::new(method, cfg);
    let residual_tol = cfg.tolerance * (1.0 + d.mean().abs());
    let mut x = x0;
    let mut r = h_alpha(alpha, x, d);
    rec.push(x, r);
    for i in 1..=cfg.max_iterations {
        let next = map(x);
        if descending && i >= 2 && next > x {
            // From x_1 on the exact sequence cannot increase; a rise means
            // x already sits at the floating-point resolution of the root.
            return rec.finish(x, alpha, method, i - 1, Termination::ToleranceMet, r);
        }
        let next_r = h_alpha(alpha, next, d);
        rec.push(next, next_r);
        let step = (next - x).abs();
        let small_step = step <= cfg.tolerance * x.abs().max(1.0);
        if (small_step && next_r.abs() <= residual_tol) || step == 0.0 {
            return rec.finish(next, alpha, method, i, Termination::ToleranceMet, next_r);
        }
        x = next;
        r = next_r;
    }
    rec.finish(
        x,
        alpha,
        method,
        cfg.max_iterations,
        Termination::MaxIterationsHit,
        r,
    )
}

/// Iterate the one-sided contraction `x <- phi_a(x)` from any `x0`.
///
/// Converges geometrically with ratio `(1-2a)/(1-a)` below one half and
/// `(2a-1)/a` above. Both branches are iterated directly.
pub fn solve_one_sided<D: DistributionOracle + ?Sized>(
    alpha: AlphaLevel,
    d: &D,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    check_start(x0)?;
    if alpha.is_half() {
        return Ok(mean_result(alpha, d, x0, Method::OneSided, cfg));
    }
    Ok(fixed_point(
        alpha,
        d,
        x0,
        cfg,
        Method::OneSided,
        false,
        |x| phi_alpha(alpha, x, d),
    ))
}

/// Iterate the two-sided map `x <- psi_a(x)`.
///
/// Below one half the iterates from `x_1` on decrease monotonically to the
/// expectile. Above one half the problem is reflected onto `-X` at level
/// `1 - a`.
pub fn solve_two_sided<D: DistributionOracle + ?Sized>(
    alpha: AlphaLevel,
    d: &D,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    check_start(x0)?;
    if alpha.is_half() {
        Ok(mean_result(alpha, d, x0, Method::TwoSided, cfg))
    } else if alpha.below_half() {
        Ok(two_sided_descent(alpha, d, x0, cfg))
    } else {
        reflect_solve(alpha, &negate(d), x0, cfg, |a, nd, y0, c| {
            Ok(two_sided_descent(a, nd, y0, c))
        })
    }
}

fn two_sided_descent<D: DistributionOracle + ?Sized>(
    alpha: AlphaLevel,
    d: &D,
    x0: f64,
    cfg: &SolverConfig,
) -> ExpectileResult {
    debug_assert!(alpha.below_half());
    fixed_point(alpha, d, x0, cfg, Method::TwoSided, true, |x| {
        psi_alpha(alpha, x, d)
    })
}

/// Solve at `alpha > 1/2` through `e_a(X) = -e_{1-a}(-X)`.
///
/// `reflected` must be the law of `-X`. The inner solver runs at level
/// `1 - a` from `-x0`; its value and trace are negated back, so the returned
/// result describes `X` at level `a`.
pub fn reflect_solve<R, F>(
    alpha: AlphaLevel,
    reflected: &R,
    x0: f64,
    cfg: &SolverConfig,
    inner: F,
) -> Result<ExpectileResult>
where
    R: DistributionOracle + ?Sized,
    F: FnOnce(AlphaLevel, &R, f64, &SolverConfig) -> Result<ExpectileResult>,
{
    if alpha.value() <= 0.5 {
        return Err(ExpectileError::AlphaBranchMismatch(alpha.value()));
    }
    let res = inner(alpha.complement(), reflected, -x0, cfg)?;
    Ok(ExpectileResult {
        value: -res.value,
        alpha,
        method: res.method,
        iterations: res.iterations,
        termination: res.termination,
        foc_residual: -res.foc_residual,
        trace: res.trace.map(IterationTrace::reflected),
    })
}

const MAX_DOUBLINGS: usize = 200;

/// Root of `h_a` by bisection.
///
/// The bracket is the support when it is bounded; otherwise it grows from
/// `mean +- 1` by doubling until `h_a` changes sign. `h_a` is nonincreasing,
/// so `h_a(lo) >= 0 >= h_a(hi)` identifies a bracket.
pub fn solve_bisection<D: DistributionOracle + ?Sized>(
    alpha: AlphaLevel,
    d: &D,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    let method = Method::Bisection;
    let h = |x: f64| h_alpha(alpha, x, d);
    let (mut lo, mut hi) = match d.support_bounds() {
        Some(bounds) => bounds,
        None => {
            let centre = d.mean();
            let mut half = 1.0;
            let mut found = None;
            for _ in 0..MAX_DOUBLINGS {
                let (lo, hi) = (centre - half, centre + half);
                if h(lo) >= 0.0 && h(hi) <= 0.0 {
                    found = Some((lo, hi));
                    break;
                }
                half *= 2.0;
            }
            found.ok_or(ExpectileError::BracketingFailed(MAX_DOUBLINGS))?
        }
    };

    let mut rec = Recorder::new(method, cfg);
    let mut iterations = 0;
    let mut termination = Termination::ToleranceMet;
    loop {
        let width_tol = cfg.tolerance * lo.abs().max(hi.abs()).max(1.0);
        if hi - lo <= width_tol {
            break;
        }
        if iterations == cfg.max_iterations {
            termination = Termination::MaxIterationsHit;
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let r = h(mid);
        rec.push(mid, r);
        if r > 0.0 {
            lo = mid;
        } else if r < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    let r = h(value);
    rec.push(value, r);
    Ok(rec.finish(value, alpha, method, iterations, termination, r))
}
