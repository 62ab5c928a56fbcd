//! Finite-termination solvers for sample expectiles.
//!
//! On an empirical distribution both fixed-point maps are piecewise simple
//! between consecutive sample values: the one-sided map is piecewise linear
//! and the two-sided map is piecewise constant. Cells are `[z_k, z_{k+1})`,
//! indexed by `k = #{z <= x}`.

use serde::Serialize;

use crate::alpha::AlphaLevel;
use crate::distribution::{DistributionOracle, EmpiricalDistribution};
use crate::error::{ExpectileError, Result};
use crate::maps::{h_alpha, phi_alpha};
use crate::solvers::{check_start, Method, Recorder, SolverConfig, Termination};
use crate::ExpectileResult;

/// Which sample values lie strictly above an iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionState {
    /// Number of sample values `<= x`.
    pub k: usize,
    /// Sum of the sample values `> x`.
    pub tail_sum: f64,
}

impl PartitionState {
    pub fn at(d: &EmpiricalDistribution, x: f64) -> Self {
        let k = d.count_le(x);
        PartitionState {
            k,
            tail_sum: d.tail_sum(k),
        }
    }

    /// Closed cell `[z_k, z_{k+1}]` on which this partition is the right one,
    /// with infinite ends outside the sample.
    pub fn closed_cell(&self, d: &EmpiricalDistribution) -> (f64, f64) {
        let v = d.values();
        let lo = if self.k == 0 {
            f64::NEG_INFINITY
        } else {
            v[self.k - 1]
        };
        let hi = v.get(self.k).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// Fixed point of the linear piece of the one-sided map for this
    /// partition: `((2a-1) z~ + N(1-a) zbar) / (N(1-a) + (N-K)(2a-1))`.
    pub fn linear_fixed_point(&self, alpha: AlphaLevel, d: &EmpiricalDistribution) -> f64 {
        let a = alpha.value();
        let n = d.count() as f64;
        let above = (d.count() - self.k) as f64;
        // Rearranged as zbar + (2a-1)(z~ - (N-K) zbar) / den so that an empty
        // tail returns the mean exactly.
        let mean = d.mean();
        let c = 2.0 * a - 1.0;
        mean + c * (self.tail_sum - above * mean) / (n * (1.0 - a) + above * c)
    }
}

fn require_below_half(alpha: AlphaLevel) -> Result<()> {
    if alpha.below_half() {
        Ok(())
    } else {
        Err(ExpectileError::AlphaBranchMismatch(alpha.value()))
    }
}

/// `zbar + (2a-1)/(N(1-a)) * sum_{z > x} (z - x)`, for `a < 1/2`.
pub fn sample_phi_eval(alpha: AlphaLevel, d: &EmpiricalDistribution, x: f64) -> Result<f64> {
    require_below_half(alpha)?;
    Ok(phi_below_half(alpha, d, x))
}

fn phi_below_half(alpha: AlphaLevel, d: &EmpiricalDistribution, x: f64) -> f64 {
    let a = alpha.value();
    let n = d.count() as f64;
    let k = d.count_le(x);
    let excess = d.tail_sum(k) - (d.count() - k) as f64 * x;
    d.mean() + (2.0 * a - 1.0) / (n * (1.0 - a)) * excess
}

/// Weighted average `(a S_hi + (1-a) S_lo) / (a (N-k) + (1-a) k)`.
///
/// Only depends on `k = #{z <= x}`, so two points in the same cell give
/// bit-identical results.
pub fn sample_psi_eval(alpha: AlphaLevel, d: &EmpiricalDistribution, x: f64) -> f64 {
    psi_on_cell(alpha, d, d.count_le(x))
}

fn psi_on_cell(alpha: AlphaLevel, d: &EmpiricalDistribution, k: usize) -> f64 {
    // Same quotient, anchored at the mean:
    // zbar + (2a-1)(S_hi - (N-k) zbar) / (a (N-k) + (1-a) k).
    let a = alpha.value();
    let above = (d.count() - k) as f64;
    let mean = d.mean();
    let den = a * above + (1.0 - a) * k as f64;
    mean + (2.0 * a - 1.0) * (d.tail_sum(k) - above * mean) / den
}

/// One-sided iteration with closed-form termination.
///
/// After every step the partition `K = #{z <= x_{i+1}}` is frozen and the
/// fixed point `e*` of the corresponding linear piece is computed. Because the
/// map is continuous, `e*` is the sample expectile as soon as it lies in the
/// closed cell `[z_K, z_{K+1}]`; the run then ends with
/// [`Termination::FiniteTermination`] and the trace ends with `e*`.
pub fn solve_sample_one_sided(
    alpha: AlphaLevel,
    d: &EmpiricalDistribution,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    require_below_half(alpha)?;
    check_start(x0)?;
    let method = Method::SampleOneSided;
    let mut rec = Recorder::new(method, cfg);
    let residual_tol = cfg.tolerance * (1.0 + d.mean().abs());
    let mut x = x0;
    let mut r = h_alpha(alpha, x, d);
    rec.push(x, r);
    for i in 1..=cfg.max_iterations {
        let next = phi_below_half(alpha, d, x);
        let next_r = h_alpha(alpha, next, d);
        rec.push(next, next_r);

        let part = PartitionState::at(d, next);
        let candidate = part.linear_fixed_point(alpha, d);
        let (lo, hi) = part.closed_cell(d);
        let slack = cfg.tolerance * candidate.abs().max(1.0);
        if candidate >= lo - slack && candidate <= hi + slack {
            let cr = h_alpha(alpha, candidate, d);
            rec.push(candidate, cr);
            return Ok(rec.finish(
                candidate,
                alpha,
                method,
                i,
                Termination::FiniteTermination,
                cr,
            ));
        }

        let step = (next - x).abs();
        if (step <= cfg.tolerance * x.abs().max(1.0) && next_r.abs() <= residual_tol) || step == 0.0
        {
            return Ok(rec.finish(next, alpha, method, i, Termination::ToleranceMet, next_r));
        }
        x = next;
        r = next_r;
    }
    Ok(rec.finish(
        x,
        alpha,
        method,
        cfg.max_iterations,
        Termination::MaxIterationsHit,
        r,
    ))
}

/// Two-sided iteration on the piecewise-constant map.
///
/// If an iterate lands in the same cell as its predecessor it is a fixed
/// point, hence the sample expectile. Otherwise it moved down by at least one
/// cell (after the first step), so at most `N + 1` steps are ever taken.
pub fn solve_sample_two_sided(
    alpha: AlphaLevel,
    d: &EmpiricalDistribution,
    x0: f64,
    cfg: &SolverConfig,
) -> Result<ExpectileResult> {
    require_below_half(alpha)?;
    check_start(x0)?;
    let method = Method::SampleTwoSided;
    let mut rec = Recorder::new(method, cfg);
    let cap = cfg.max_iterations.min(d.count() + 1);
    let mut x = x0;
    let mut cell = d.count_le(x);
    let mut r = h_alpha(alpha, x, d);
    rec.push(x, r);
    for i in 1..=cap {
        let next = psi_on_cell(alpha, d, cell);
        let next_cell = d.count_le(next);
        let next_r = h_alpha(alpha, next, d);
        rec.push(next, next_r);
        if next_cell == cell {
            return Ok(rec.finish(
                next,
                alpha,
                method,
                i,
                Termination::FiniteTermination,
                next_r,
            ));
        }
        if i >= 2 && next >= x {
            // Exact arithmetic only moves down from here on; an upward move
            // means the expectile sits on a sample value and rounding put
            // the two neighbouring cells' constants on opposite sides of it.
            let (value, res) = if next_r.abs() <= r.abs() {
                (next, next_r)
            } else {
                (x, r)
            };
            return Ok(rec.finish(value, alpha, method, i, Termination::FiniteTermination, res));
        }
        x = next;
        cell = next_cell;
        r = next_r;
    }
    Ok(rec.finish(x, alpha, method, cap, Termination::MaxIterationsHit, r))
}

/// One point of a sampled map curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    /// `psi(x) - x` for the two-sided sample map.
    pub psi_minus_x: f64,
    /// One-sided sample map `phi(x)`.
    pub phi: f64,
}

/// Samples both sample maps on `points` equally spaced abscissae spanning
/// `[z_1, z_N]`, widened by 10% of the range on either side so the constant
/// outer pieces are visible.
pub fn map_curve(alpha: AlphaLevel, d: &EmpiricalDistribution, points: usize) -> Vec<CurvePoint> {
    let (lo, hi) = (d.min(), d.max());
    let pad = if hi > lo { 0.1 * (hi - lo) } else { 1.0 };
    let (lo, hi) = (lo - pad, hi + pad);
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            CurvePoint {
                x,
                psi_minus_x: sample_psi_eval(alpha, d, x) - x,
                phi: phi_alpha(alpha, x, d),
            }
        })
        .collect()
}
