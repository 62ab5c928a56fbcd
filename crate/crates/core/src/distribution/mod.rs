//! Distribution oracles.
//!
//! Every formula used by the expectile maps reduces to a handful of tail
//! expectations of the underlying law. [`DistributionOracle`] is the contract
//! for supplying them. The tie convention is fixed throughout: the upper tail
//! is strict (`X > x`) and the lower tail is inclusive (`X <= x`).

mod analytic;
mod empirical;
mod negated;

pub use analytic::AnalyticDistribution;
pub use empirical::EmpiricalDistribution;
pub use negated::{negate, Negated};

use serde::Serialize;

/// All first-order tail quantities of a law at a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEval {
    /// `E(X - x)_+`
    pub upm: f64,
    /// `E(X - x)_-`
    pub lpm: f64,
    /// `P(X > x)`
    pub surv: f64,
    /// `P(X <= x)`
    pub cdf: f64,
    /// `E[X 1{X > x}]`
    pub upe: f64,
}

pub trait DistributionOracle {
    fn mean(&self) -> f64;

    /// `E(X - x)_+`
    fn upper_partial_moment(&self, x: f64) -> f64;

    /// `E(X - x)_-`
    fn lower_partial_moment(&self, x: f64) -> f64;

    /// `P(X > x)`
    fn survival(&self, x: f64) -> f64;

    /// `P(X <= x)`
    fn cdf(&self, x: f64) -> f64;

    /// `E[X 1{X > x}]`
    fn upper_partial_expectation(&self, x: f64) -> f64;

    /// `P(X < x)`. Needed to express the strict upper tail of `-X`.
    fn mass_below(&self, x: f64) -> f64;

    /// `P(X >= x)`
    fn mass_at_or_above(&self, x: f64) -> f64 {
        1.0 - self.mass_below(x)
    }

    /// `E[X 1{X < x}]`
    fn lower_partial_expectation_strict(&self, x: f64) -> f64;

    /// Closed interval containing all the mass, if bounded.
    fn support_bounds(&self) -> Option<(f64, f64)>;

    /// `(E(X - x)_+^2, E(X - x)_-^2)`, when the oracle can supply them.
    fn second_partial_moments(&self, _x: f64) -> Option<(f64, f64)> {
        None
    }

    fn eval(&self, x: f64) -> OracleEval {
        OracleEval {
            upm: self.upper_partial_moment(x),
            lpm: self.lower_partial_moment(x),
            surv: self.survival(x),
            cdf: self.cdf(x),
            upe: self.upper_partial_expectation(x),
        }
    }
}

impl<D: DistributionOracle + ?Sized> DistributionOracle for &D {
    fn mean(&self) -> f64 {
        (**self).mean()
    }
    fn upper_partial_moment(&self, x: f64) -> f64 {
        (**self).upper_partial_moment(x)
    }
    fn lower_partial_moment(&self, x: f64) -> f64 {
        (**self).lower_partial_moment(x)
    }
    fn survival(&self, x: f64) -> f64 {
        (**self).survival(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn upper_partial_expectation(&self, x: f64) -> f64 {
        (**self).upper_partial_expectation(x)
    }
    fn mass_below(&self, x: f64) -> f64 {
        (**self).mass_below(x)
    }
    fn mass_at_or_above(&self, x: f64) -> f64 {
        (**self).mass_at_or_above(x)
    }
    fn lower_partial_expectation_strict(&self, x: f64) -> f64 {
        (**self).lower_partial_expectation_strict(x)
    }
    fn support_bounds(&self) -> Option<(f64, f64)> {
        (**self).support_bounds()
    }
    fn second_partial_moments(&self, x: f64) -> Option<(f64, f64)> {
        (**self).second_partial_moments(x)
    }
    fn eval(&self, x: f64) -> OracleEval {
        (**self).eval(x)
    }
}

/// Either kind of concrete distribution, as produced by ingestion.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Empirical(EmpiricalDistribution),
    Analytic(AnalyticDistribution),
}

impl Distribution {
    pub fn as_empirical(&self) -> Option<&EmpiricalDistribution> {
        match self {
            Distribution::Empirical(d) => Some(d),
            Distribution::Analytic(_) => None,
        }
    }

    /// Law of `-X`, in the same family.
    pub fn negated(&self) -> Distribution {
        match self {
            Distribution::Empirical(d) => Distribution::Empirical(d.negated()),
            Distribution::Analytic(d) => Distribution::Analytic(d.negated()),
        }
    }

    /// Lower `alpha`-quantile: the smallest `x` with `P(X <= x) >= alpha`.
    pub fn quantile(&self, alpha: f64) -> f64 {
        match self {
            Distribution::Empirical(d) => d.lower_quantile(alpha),
            Distribution::Analytic(d) => d.quantile(alpha),
        }
    }
}

impl From<EmpiricalDistribution> for Distribution {
    fn from(d: EmpiricalDistribution) -> Self {
        Distribution::Empirical(d)
    }
}

impl From<AnalyticDistribution> for Distribution {
    fn from(d: AnalyticDistribution) -> Self {
        Distribution::Analytic(d)
    }
}

macro_rules! delegate {
    ($self:ident, $d:ident => $e:expr) => {
        match $self {
            Distribution::Empirical($d) => $e,
            Distribution::Analytic($d) => $e,
        }
    };
}

impl DistributionOracle for Distribution {
    fn mean(&self) -> f64 {
        delegate!(self, d => d.mean())
    }
    fn upper_partial_moment(&self, x: f64) -> f64 {
        delegate!(self, d => d.upper_partial_moment(x))
    }
    fn lower_partial_moment(&self, x: f64) -> f64 {
        delegate!(self, d => d.lower_partial_moment(x))
    }
    fn survival(&self, x: f64) -> f64 {
        delegate!(self, d => d.survival(x))
    }
    fn cdf(&self, x: f64) -> f64 {
        delegate!(self, d => d.cdf(x))
    }
    fn upper_partial_expectation(&self, x: f64) -> f64 {
        delegate!(self, d => d.upper_partial_expectation(x))
    }
    fn mass_below(&self, x: f64) -> f64 {
        delegate!(self, d => d.mass_below(x))
    }
    fn mass_at_or_above(&self, x: f64) -> f64 {
        delegate!(self, d => d.mass_at_or_above(x))
    }
    fn lower_partial_expectation_strict(&self, x: f64) -> f64 {
        delegate!(self, d => d.lower_partial_expectation_strict(x))
    }
    fn support_bounds(&self) -> Option<(f64, f64)> {
        delegate!(self, d => d.support_bounds())
    }
    fn second_partial_moments(&self, x: f64) -> Option<(f64, f64)> {
        delegate!(self, d => d.second_partial_moments(x))
    }
    fn eval(&self, x: f64) -> OracleEval {
        delegate!(self, d => d.eval(x))
    }
}
