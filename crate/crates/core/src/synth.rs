//! Seeded synthetic samples.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`, so a
//! given `(family, n, seed)` always yields the same sample on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal, Uniform};

use crate::distribution::AnalyticDistribution;

pub fn draw(family: &AnalyticDistribution, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *family {
        AnalyticDistribution::Normal { mean, std_dev } => {
            let normal = Normal::new(mean, std_dev).expect("validated at construction");
            (0..n).map(|_| normal.sample(&mut rng)).collect()
        }
        AnalyticDistribution::Uniform { lower, upper } => {
            let uniform = Uniform::new(lower, upper).expect("validated at construction");
            (0..n).map(|_| uniform.sample(&mut rng)).collect()
        }
        AnalyticDistribution::PointMass(c) => vec![c; n],
    }
}
