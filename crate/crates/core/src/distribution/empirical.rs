use super::DistributionOracle;
use crate::error::{ExpectileError, Result};

/// Sorted sample `z_1 <= ... <= z_N` with prefix sums.
///
/// `prefix_sums[k] = z_1 + ... + z_k` (so `prefix_sums[0] = 0` and the vector
/// has `N + 1` entries). Tail sums are differences of prefix sums, which
/// fixes the summation order and makes every oracle query `O(log N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    prefix_sums: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(data: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(ExpectileError::EmptySample);
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ExpectileError::NonFiniteDatum { index, value });
        }
        let mut values = data.to_vec();
        values.sort_by(f64::total_cmp);
        Ok(Self::from_sorted(values))
    }

    fn from_sorted(values: Vec<f64>) -> Self {
        let mut prefix_sums = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        prefix_sums.push(acc);
        for &v in &values {
            acc += v;
            prefix_sums.push(acc);
        }
        EmpiricalDistribution {
            values,
            prefix_sums,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix_sums
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn total(&self) -> f64 {
        self.prefix_sums[self.values.len()]
    }

    /// Number of sample values `<= x`.
    #[inline]
    pub fn count_le(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// Number of sample values `< x`.
    #[inline]
    pub fn count_lt(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// Sum of the values strictly above the `k` smallest ones.
    #[inline]
    pub fn tail_sum(&self, k: usize) -> f64 {
        self.total() - self.prefix_sums[k]
    }

    /// Sample of `-z`, re-sorted.
    pub fn negated(&self) -> Self {
        Self::from_sorted(self.values.iter().rev().map(|v| -v).collect())
    }

    /// Order statistic `z_(ceil(alpha N))`, clamped to `[z_1, z_N]`.
    pub fn lower_quantile(&self, alpha: f64) -> f64 {
        let n = self.values.len();
        let rank = (alpha * n as f64).ceil() as usize;
        self.values[rank.clamp(1, n) - 1]
    }

    /// Distinct sample values, i.e. the breakpoints of the piecewise maps.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut out = self.values.clone();
        out.dedup();
        out
    }

    fn n(&self) -> f64 {
        self.values.len() as f64
    }
}

impl DistributionOracle for EmpiricalDistribution {
    fn mean(&self) -> f64 {
        self.total() / self.n()
    }

    fn upper_partial_moment(&self, x: f64) -> f64 {
        let k = self.count_le(x);
        (self.tail_sum(k) - (self.values.len() - k) as f64 * x) / self.n()
    }

    fn lower_partial_moment(&self, x: f64) -> f64 {
        let k = self.count_le(x);
        (k as f64 * x - self.prefix_sums[k]) / self.n()
    }

    fn survival(&self, x: f64) -> f64 {
        (self.values.len() - self.count_le(x)) as f64 / self.n()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.n()
    }

    fn upper_partial_expectation(&self, x: f64) -> f64 {
        self.tail_sum(self.count_le(x)) / self.n()
    }

    fn mass_below(&self, x: f64) -> f64 {
        self.count_lt(x) as f64 / self.n()
    }

    fn mass_at_or_above(&self, x: f64) -> f64 {
        (self.values.len() - self.count_lt(x)) as f64 / self.n()
    }

    fn lower_partial_expectation_strict(&self, x: f64) -> f64 {
        self.prefix_sums[self.count_lt(x)] / self.n()
    }

    fn support_bounds(&self) -> Option<(f64, f64)> {
        Some((self.min(), self.max()))
    }

    fn second_partial_moments(&self, x: f64) -> Option<(f64, f64)> {
        let (mut upper, mut lower) = (0.0, 0.0);
        for &z in &self.values {
            let d = z - x;
            if d > 0.0 {
                upper += d * d;
            } else {
                lower += d * d;
            }
        }
        Some((upper / self.n(), lower / self.n()))
    }

    fn eval(&self, x: f64) -> super::OracleEval {
        let n = self.n();
        let k = self.count_le(x);
        let above = (self.values.len() - k) as f64;
        let tail = self.tail_sum(k);
        super::OracleEval {
            upm: (tail - above * x) / n,
            lpm: (k as f64 * x - self.prefix_sums[k]) / n,
            surv: above / n,
            cdf: k as f64 / n,
            upe: tail / n,
        }
    }
}
