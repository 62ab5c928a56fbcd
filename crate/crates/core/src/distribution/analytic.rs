use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::DistributionOracle;
use crate::error::{ExpectileError, Result};

/// Closed-form reference laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticDistribution {
    Normal { mean: f64, std_dev: f64 },
    Uniform { lower: f64, upper: f64 },
    PointMass(f64),
}

fn std_density(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// `P(Z > t)` for standard normal `Z`, accurate in both tails.
fn std_survival(t: f64) -> f64 {
    0.5 * libm::erfc(t * FRAC_1_SQRT_2)
}

fn std_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t * FRAC_1_SQRT_2)
}

impl AnalyticDistribution {
    pub fn normal(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() || !(std_dev.is_finite() && std_dev > 0.0) {
            return Err(ExpectileError::InvalidDistribution(format!(
                "normal needs finite mean and positive std_dev, got ({mean}, {std_dev})"
            )));
        }
        Ok(AnalyticDistribution::Normal { mean, std_dev })
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(ExpectileError::InvalidDistribution(format!(
                "uniform needs finite bounds with a < b, got ({lower}, {upper})"
            )));
        }
        Ok(AnalyticDistribution::Uniform { lower, upper })
    }

    pub fn point_mass(at: f64) -> Result<Self> {
        if !at.is_finite() {
            return Err(ExpectileError::InvalidDistribution(format!(
                "point mass location must be finite, got {at}"
            )));
        }
        Ok(AnalyticDistribution::PointMass(at))
    }

    pub fn negated(&self) -> Self {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => AnalyticDistribution::Normal {
                mean: -mean,
                std_dev,
            },
            AnalyticDistribution::Uniform { lower, upper } => AnalyticDistribution::Uniform {
                lower: -upper,
                upper: -lower,
            },
            AnalyticDistribution::PointMass(c) => AnalyticDistribution::PointMass(-c),
        }
    }

    /// Lower quantile. The normal case inverts the cdf by bisection.
    pub fn quantile(&self, alpha: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if std_cdf(mid) < alpha {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                mean + std_dev * hi
            }
            AnalyticDistribution::Uniform { lower, upper } => lower + alpha * (upper - lower),
            AnalyticDistribution::PointMass(c) => c,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            AnalyticDistribution::Normal { std_dev, .. } => std_dev * std_dev,
            AnalyticDistribution::Uniform { lower, upper } => (upper - lower).powi(2) / 12.0,
            AnalyticDistribution::PointMass(_) => 0.0,
        }
    }
}

impl DistributionOracle for AnalyticDistribution {
    fn mean(&self) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, .. } => mean,
            AnalyticDistribution::Uniform { lower, upper } => 0.5 * (lower + upper),
            AnalyticDistribution::PointMass(c) => c,
        }
    }

    fn upper_partial_moment(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let t = (x - mean) / std_dev;
                std_dev * std_density(t) + (mean - x) * std_survival(t)
            }
            AnalyticDistribution::Uniform { lower, upper } => {
                if x <= lower {
                    self.mean() - x
                } else if x >= upper {
                    0.0
                } else {
                    (upper - x).powi(2) / (2.0 * (upper - lower))
                }
            }
            AnalyticDistribution::PointMass(c) => (c - x).max(0.0),
        }
    }

    fn lower_partial_moment(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let t = (x - mean) / std_dev;
                std_dev * std_density(t) + (x - mean) * std_cdf(t)
            }
            AnalyticDistribution::Uniform { lower, upper } => {
                if x <= lower {
                    0.0
                } else if x >= upper {
                    x - self.mean()
                } else {
                    (x - lower).powi(2) / (2.0 * (upper - lower))
                }
            }
            AnalyticDistribution::PointMass(c) => (x - c).max(0.0),
        }
    }

    fn survival(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => std_survival((x - mean) / std_dev),
            AnalyticDistribution::Uniform { lower, upper } => {
                ((upper - x) / (upper - lower)).clamp(0.0, 1.0)
            }
            AnalyticDistribution::PointMass(c) => {
                if c > x {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => std_cdf((x - mean) / std_dev),
            AnalyticDistribution::Uniform { lower, upper } => {
                ((x - lower) / (upper - lower)).clamp(0.0, 1.0)
            }
            AnalyticDistribution::PointMass(c) => {
                if c <= x {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn upper_partial_expectation(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let t = (x - mean) / std_dev;
                std_dev * std_density(t) + mean * std_survival(t)
            }
            AnalyticDistribution::Uniform { lower, upper } => {
                if x <= lower {
                    self.mean()
                } else if x >= upper {
                    0.0
                } else {
                    (upper * upper - x * x) / (2.0 * (upper - lower))
                }
            }
            AnalyticDistribution::PointMass(c) => c * self.survival(x),
        }
    }

    fn mass_below(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::PointMass(c) => {
                if c < x {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.cdf(x),
        }
    }

    fn mass_at_or_above(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::PointMass(c) => {
                if c >= x {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.survival(x),
        }
    }

    fn lower_partial_expectation_strict(&self, x: f64) -> f64 {
        match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let t = (x - mean) / std_dev;
                mean * std_cdf(t) - std_dev * std_density(t)
            }
            AnalyticDistribution::Uniform { lower, upper } => {
                if x <= lower {
                    0.0
                } else if x >= upper {
                    self.mean()
                } else {
                    (x * x - lower * lower) / (2.0 * (upper - lower))
                }
            }
            AnalyticDistribution::PointMass(c) => c * self.mass_below(x),
        }
    }

    fn support_bounds(&self) -> Option<(f64, f64)> {
        match *self {
            AnalyticDistribution::Normal { .. } => None,
            AnalyticDistribution::Uniform { lower, upper } => Some((lower, upper)),
            AnalyticDistribution::PointMass(c) => Some((c, c)),
        }
    }

    fn second_partial_moments(&self, x: f64) -> Option<(f64, f64)> {
        Some(match *self {
            AnalyticDistribution::Normal { mean, std_dev } => {
                let t = (x - mean) / std_dev;
                let (pdf, s, c) = (std_density(t), std_survival(t), std_cdf(t));
                let v = std_dev * std_dev;
                (
                    v * ((1.0 + t * t) * s - t * pdf),
                    v * ((1.0 + t * t) * c + t * pdf),
                )
            }
            AnalyticDistribution::Uniform { lower, upper } => {
                let w = upper - lower;
                let full = self.variance() + (self.mean() - x).powi(2);
                if x <= lower {
                    (full, 0.0)
                } else if x >= upper {
                    (0.0, full)
                } else {
                    (
                        (upper - x).powi(3) / (3.0 * w),
                        (x - lower).powi(3) / (3.0 * w),
                    )
                }
            }
            AnalyticDistribution::PointMass(c) => {
                let d = c - x;
                if d > 0.0 {
                    (d * d, 0.0)
                } else {
                    (0.0, d * d)
                }
            }
        })
    }
}
