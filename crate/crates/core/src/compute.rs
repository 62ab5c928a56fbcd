//! Method dispatch: one entry point that handles `a = 1/2`, reflection for
//! `a > 1/2`, and starting-point policies for every method.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::alpha::AlphaLevel;
use crate::distribution::{Distribution, DistributionOracle, EmpiricalDistribution};
use crate::error::{ExpectileError, Result};
use crate::maps::h_alpha;
use crate::sample::{solve_sample_one_sided, solve_sample_two_sided};
use crate::solvers::{
    reflect_solve, solve_bisection, solve_one_sided, solve_two_sided, ExpectileResult,
    IterationTrace, Method, SolverConfig, Termination,
};

/// How the starting point of an iteration is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum X0Policy {
    Mean,
    /// Lower quantile at the same level as the expectile.
    Quantile,
    Explicit(f64),
}

impl X0Policy {
    pub fn resolve(&self, alpha: AlphaLevel, d: &Distribution) -> f64 {
        match *self {
            X0Policy::Mean => d.mean(),
            X0Policy::Quantile => d.quantile(alpha.value()),
            X0Policy::Explicit(x) => x,
        }
    }
}

impl fmt::Display for X0Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            X0Policy::Mean => f.write_str("mean"),
            X0Policy::Quantile => f.write_str("quantile"),
            X0Policy::Explicit(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for X0Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mean" => Ok(X0Policy::Mean),
            "quantile" => Ok(X0Policy::Quantile),
            other => match other.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(X0Policy::Explicit(x)),
                _ => Err(format!(
                    "x0 must be `mean`, `quantile` or a finite number, got `{other}`"
                )),
            },
        }
    }
}

/// Solve with any method at any level.
///
/// Sample methods need an empirical distribution and are reflected for
/// `a > 1/2`; at `a = 1/2` they return the sample mean directly.
pub fn solve(
    method: Method,
    alpha: AlphaLevel,
    d: &Distribution,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    match method {
        Method::OneSided => solve_one_sided(alpha, d, x0, cfg),
        Method::TwoSided => solve_two_sided(alpha, d, x0, cfg),
        Method::Bisection => solve_bisection(alpha, d, cfg),
        Method::SampleOneSided | Method::SampleTwoSided => {
            let sample = d
                .as_empirical()
                .ok_or(ExpectileError::UnsupportedMethod(method.as_str()))?;
            solve_sample(method, alpha, sample, x0, cfg)
        }
    }
}

/// Sample solvers at any level.
pub fn solve_sample(
    method: Method,
    alpha: AlphaLevel,
    d: &EmpiricalDistribution,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    let inner = match method {
        Method::SampleOneSided => solve_sample_one_sided,
        Method::SampleTwoSided => solve_sample_two_sided,
        other => return Err(ExpectileError::UnsupportedMethod(other.as_str())),
    };
    if alpha.is_half() {
        let mean = d.mean();
        let r = h_alpha(alpha, mean, d);
        let trace = cfg.record_trace.then(|| {
            let mut t = IterationTrace::new(method);
            t.push(x0, h_alpha(alpha, x0, d));
            t.push(mean, r);
            t
        });
        return Ok(ExpectileResult {
            value: mean,
            alpha,
            method,
            iterations: 1,
            termination: Termination::FiniteTermination,
            foc_residual: r,
            trace,
        });
    }
    if alpha.below_half() {
        inner(alpha, d, x0, cfg)
    } else {
        reflect_solve(alpha, &d.negated(), x0, cfg, inner)
    }
}

/// `e_a(X)` computed as `-e_{1-a}(-X)` with the given method. Used to check
/// the reflection identity independently of the dispatch above.
pub fn solve_reflected(
    method: Method,
    alpha: AlphaLevel,
    d: &Distribution,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let res = solve(method, alpha.complement(), &d.negated(), -x0, cfg)?;
    Ok(-res.value)
}

/// Scale used for relative agreement checks: `1 + |value| + |mean|`.
pub fn agreement_scale(value: f64, mean: f64) -> f64 {
    1.0 + value.abs() + mean.abs()
}
