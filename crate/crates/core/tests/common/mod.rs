#![allow(dead_code)]

use expectile_core::maps::h_alpha;
use expectile_core::{AlphaLevel, AnalyticDistribution, DistributionOracle, EmpiricalDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alpha(v: f64) -> AlphaLevel {
    AlphaLevel::new(v).unwrap()
}

pub fn sample(v: &[f64]) -> EmpiricalDistribution {
    EmpiricalDistribution::new(v).unwrap()
}

/// Uniform values in `[lo, hi]`, sometimes rounded to integers so that ties
/// and expectiles sitting on data points get exercised.
pub fn random_sample(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> EmpiricalDistribution {
    let round = rng.random_bool(0.3);
    let data: Vec<f64> = (0..n)
        .map(|_| {
            let v = rng.random_range(lo..=hi);
            if round {
                v.round()
            } else {
                v
            }
        })
        .collect();
    EmpiricalDistribution::new(&data).unwrap()
}

pub fn analytic_zoo() -> Vec<AnalyticDistribution> {
    vec![
        AnalyticDistribution::normal(0.0, 1.0).unwrap(),
        AnalyticDistribution::normal(2.0, 6.0).unwrap(),
        AnalyticDistribution::normal(-50.0, 0.5).unwrap(),
        AnalyticDistribution::uniform(0.0, 1.0).unwrap(),
        AnalyticDistribution::uniform(-3.0, 5.0).unwrap(),
    ]
}

/// Reference expectile by bisection on `h_a`, written independently of the
/// library solvers: bracket by doubling, then halve until the bracket stops
/// shrinking.
pub fn reference_expectile<D: DistributionOracle>(a: AlphaLevel, d: &D) -> f64 {
    let h = |x: f64| h_alpha(a, x, d);
    let m = d.mean();
    let mut w = 1.0;
    while !(h(m - w) >= 0.0 && h(m + w) <= 0.0) {
        w *= 2.0;
    }
    let (mut lo, mut hi) = (m - w, m + w);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Brute-force first-order tail quantities by direct summation.
pub fn brute_force(data: &[f64], x: f64) -> (f64, f64, f64, f64, f64) {
    let n = data.len() as f64;
    let (mut upm, mut lpm, mut above, mut below, mut upe) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &z in data {
        if z > x {
            upm += z - x;
            above += 1.0;
            upe += z;
        } else {
            lpm += x - z;
            below += 1.0;
        }
    }
    (upm / n, lpm / n, above / n, below / n, upe / n)
}

pub fn scale(value: f64, mean: f64) -> f64 {
    1.0 + value.abs() + mean.abs()
}
