//! Expectiles of univariate distributions.
//!
//! The `a`-expectile of `X` is the root of the first-order residual
//! `h_a(x) = a E(X-x)_+ - (1-a) E(X-x)_-`. This crate computes it by
//!
//! - iterating the one-sided contraction `x <- E X + c * E(X-x)_{+/-}`
//!   ([`solvers::solve_one_sided`]),
//! - iterating the two-sided weighted average `x <- psi_a(x)`
//!   ([`solvers::solve_two_sided`]), which overshoots in the first step and
//!   then decreases monotonically for `a < 1/2`,
//! - exact finite-termination variants of both for samples
//!   ([`sample::solve_sample_one_sided`], [`sample::solve_sample_two_sided`]),
//! - plain bisection on `h_a`, kept as an independent reference
//!   ([`solvers::solve_bisection`]).
//!
//! Levels above one half are handled through `e_a(X) = -e_{1-a}(-X)`.
//!
//! ```
//! use expectile_core::{AlphaLevel, EmpiricalDistribution, SolverConfig};
//! use expectile_core::sample::solve_sample_two_sided;
//!
//! let d = EmpiricalDistribution::new(&[1.0, 2.0, 3.0, 6.0]).unwrap();
//! let a = AlphaLevel::new(0.125).unwrap();
//! let res = solve_sample_two_sided(a, &d, 6.0, &SolverConfig::default()).unwrap();
//! assert!((res.value - 1.8).abs() < 1e-12);
//! assert_eq!(res.iterations, 4);
//! ```

pub mod alpha;
pub mod compute;
pub mod distribution;
pub mod error;
pub mod maps;
pub mod sample;
pub mod solvers;
pub mod synth;

pub use alpha::AlphaLevel;
pub use compute::{solve, X0Policy};
pub use distribution::{
    AnalyticDistribution, Distribution, DistributionOracle, EmpiricalDistribution, OracleEval,
};
pub use error::{ExpectileError, Result};
pub use solvers::{ExpectileResult, IterationTrace, Method, SolverConfig, Termination};
