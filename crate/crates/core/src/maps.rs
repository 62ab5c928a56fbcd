//! Scalar maps whose fixed points or roots are the expectile.
//!
//! All functions are pure and work over any [`DistributionOracle`].

use serde::Serialize;

use crate::alpha::AlphaLevel;
use crate::distribution::DistributionOracle;
use crate::error::{ExpectileError, Result};

/// Two-sided map evaluated at `x`, with its residual/denominator decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapEvaluation {
    pub x: f64,
    /// `psi_alpha(x)`
    pub value: f64,
    /// `h_alpha(x)`
    pub h: f64,
    /// `gamma_alpha(x)`, always within `[min(a, 1-a), max(a, 1-a)]`.
    pub gamma: f64,
}

/// Asymmetric quadratic loss `(1-a) E(X-x)_-^2 + a E(X-x)_+^2`.
pub fn loss<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> Result<f64> {
    let a = alpha.value();
    let (upper, lower) = d
        .second_partial_moments(x)
        .ok_or(ExpectileError::UnsupportedOracle)?;
    Ok((1.0 - a) * lower + a * upper)
}

/// First-order residual `a E(X-x)_+ - (1-a) E(X-x)_-`. Nonincreasing in `x`,
/// zero exactly at the expectile.
pub fn h_alpha<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let a = alpha.value();
    a * d.upper_partial_moment(x) - (1.0 - a) * d.lower_partial_moment(x)
}

/// `a P(X > x) + (1-a) P(X <= x)`.
pub fn gamma_alpha<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let a = alpha.value();
    a * d.survival(x) + (1.0 - a) * d.cdf(x)
}

/// One-sided contraction map.
///
/// Uses the upper partial moment below one half and the lower partial moment
/// above; at exactly one half it is the constant `E X`.
pub fn phi_alpha<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let a = alpha.value();
    if alpha.is_half() {
        d.mean()
    } else if a < 0.5 {
        d.mean() + (2.0 * a - 1.0) / (1.0 - a) * d.upper_partial_moment(x)
    } else {
        d.mean() + (2.0 * a - 1.0) / a * d.lower_partial_moment(x)
    }
}

/// Two-sided map, evaluated in increment form `x + h(x) / gamma(x)`.
///
/// The increment form is exact at `h = 0`, whereas the weighted-average
/// quotient loses digits to cancellation when `|x|` is large.
pub fn psi_alpha<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let value = x + h_alpha(alpha, x, d) / gamma_alpha(alpha, x, d);
    debug_assert!({
        let q = psi_quotient(alpha, x, d);
        let scale = 1.0 + x.abs() + d.mean().abs() + d.upper_partial_expectation(x).abs();
        (q - value).abs() <= 1e-9 * scale
    });
    value
}

/// Two-sided map as the weighted average
/// `(a E[X 1{X>x}] + (1-a) E[X 1{X<=x}]) / gamma(x)`.
pub fn psi_quotient<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let a = alpha.value();
    let upe = d.upper_partial_expectation(x);
    (a * upe + (1.0 - a) * (d.mean() - upe)) / gamma_alpha(alpha, x, d)
}

/// Two-sided map in the recursive form used by repeated weighted averaging:
/// `((2a-1) E[X 1{X>x}] + (1-a) E X) / ((2a-1) P(X>x) + 1 - a)`.
pub fn psi_recursive<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> f64 {
    let a = alpha.value();
    let c = 2.0 * a - 1.0;
    (c * d.upper_partial_expectation(x) + (1.0 - a) * d.mean()) / (c * d.survival(x) + 1.0 - a)
}

pub fn evaluate<D: DistributionOracle + ?Sized>(alpha: AlphaLevel, x: f64, d: &D) -> MapEvaluation {
    let h = h_alpha(alpha, x, d);
    let gamma = gamma_alpha(alpha, x, d);
    MapEvaluation {
        x,
        value: x + h / gamma,
        h,
        gamma,
    }
}
