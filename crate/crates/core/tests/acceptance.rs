//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! test fails if any criterion fails.
//!
//! Run with `cargo test -p expectile-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use expectile_core::compute::{solve, solve_reflected};
use expectile_core::maps::{loss, phi_alpha};
use expectile_core::sample::{sample_psi_eval, solve_sample_two_sided};
use expectile_core::solvers::{solve_bisection, solve_one_sided, solve_two_sided};
use expectile_core::{
    synth, AlphaLevel, AnalyticDistribution, Distribution, DistributionOracle,
    EmpiricalDistribution, ExpectileError, Method, SolverConfig, X0Policy,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn traced() -> SolverConfig {
    SolverConfig::default().with_trace(true)
}

fn iterates_match(got: &[f64], want: &[f64], tol: f64) -> Result<(), String> {
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        ensure!((g - w).abs() <= tol, "iterate {}: {g} vs {w}", i + 1);
    }
    ensure!(got.len() >= want.len(), "trace too short: {}", got.len());
    Ok(())
}

fn c01_three_point_one_sided() -> Outcome {
    let d = sample(&[1.0, 2.0, 7.0]);
    let a = alpha(1.0 / 6.0);
    let cfg = traced();
    let start = Instant::now();
    let down = solve_one_sided(a, &d, 10.0 / 3.0, &cfg).map_err(|e| e.to_string())?;
    let up = solve_one_sided(a, &d, 1.0, &cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let t = down.trace.as_ref().unwrap();
    iterates_match(
        &t.iterates[1..],
        &[106.0 / 45.0, 1414.0 / 675.0, 20506.0 / 10125.0],
        1e-12,
    )?;
    let t = up.trace.as_ref().unwrap();
    iterates_match(
        &t.iterates[1..],
        &[22.0 / 15.0, 386.0 / 225.0, 6238.0 / 3375.0],
        1e-12,
    )?;
    ensure!(
        (down.value - 2.0).abs() <= 1e-10,
        "value from mean {}",
        down.value
    );
    ensure!(
        (up.value - 2.0).abs() <= 1e-10,
        "value from min {}",
        up.value
    );
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!(
        "{} / {} iterations, {elapsed:?}",
        down.iterations, up.iterations
    ))
}

fn check_table(
    d: &EmpiricalDistribution,
    a: AlphaLevel,
    table: &[(f64, f64, f64)],
) -> Result<(), String> {
    for &(lo, hi, want) in table {
        let probes = [lo, 0.5 * (lo + hi), hi - 1e-9];
        for x in probes.into_iter().filter(|x| x.is_finite()) {
            let got = sample_psi_eval(a, d, x);
            ensure!((got - want).abs() <= 1e-14, "psi({x}) = {got}, want {want}");
        }
    }
    Ok(())
}

fn all_methods(d: &EmpiricalDistribution, a: AlphaLevel, x0s: &[f64]) -> Result<Vec<f64>, String> {
    let dist: Distribution = d.clone().into();
    let mut out = Vec::new();
    for &x0 in x0s {
        for m in Method::ALL {
            let r = solve(m, a, &dist, x0, &SolverConfig::default()).map_err(|e| e.to_string())?;
            ensure!(r.converged(), "{m} from {x0} did not converge");
            out.push(r.value);
        }
    }
    Ok(out)
}

fn c02_four_point_table() -> Outcome {
    let d = sample(&[1.0, 2.0, 5.0, 8.0]);
    let a = alpha(0.25);
    let ninf = -10.0;
    check_table(
        &d,
        a,
        &[
            (ninf, 1.0, 4.0),
            (1.0, 2.0, 3.0),
            (2.0, 5.0, 11.0 / 4.0),
            (5.0, 8.0, 16.0 / 5.0),
            (8.0, 20.0, 4.0),
        ],
    )?;
    let vals = all_methods(&d, a, &[d.mean(), 1.0, 2.75, 8.0])?;
    for v in &vals {
        ensure!((v - 2.75).abs() <= 1e-10, "solver returned {v}");
    }
    Ok(format!("table exact, {} solver runs at 2.75", vals.len()))
}

fn c03_four_step_termination() -> Outcome {
    let d = sample(&[1.0, 2.0, 3.0, 6.0]);
    let a = alpha(0.125);
    let r = solve_sample_two_sided(a, &d, 6.0, &traced()).map_err(|e| e.to_string())?;
    ensure!(r.iterations == 4, "took {} steps", r.iterations);
    let t = r.trace.unwrap();
    ensure!(t.iterates.len() == 5, "trace length {}", t.iterates.len());
    iterates_match(
        &t.iterates[1..],
        &[3.0, 24.0 / 11.0, 15.0 / 8.0, 9.0 / 5.0],
        1e-14,
    )?;
    ensure!((r.value - 1.8).abs() <= 1e-14, "value {}", r.value);
    check_table(
        &d,
        a,
        &[
            (-10.0, 1.0, 3.0),
            (1.0, 2.0, 9.0 / 5.0),
            (2.0, 3.0, 15.0 / 8.0),
            (3.0, 6.0, 24.0 / 11.0),
            (6.0, 20.0, 3.0),
        ],
    )?;
    Ok("3 -> 24/11 -> 15/8 -> 9/5 in 4 steps".into())
}

fn c04_step_bound() -> Outcome {
    let mut rng = rng(4);
    let start = Instant::now();
    let mut worst = 0usize;
    let mut runs = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=200);
        let d = random_sample(&mut rng, n, -100.0, 100.0);
        for a in [0.05, 0.2, 0.45] {
            let x0 = match rng.random_range(0..3) {
                0 => d.mean(),
                1 => d.max(),
                _ => rng.random_range(-150.0..150.0),
            };
            let r = solve_sample_two_sided(alpha(a), &d, x0, &SolverConfig::default())
                .map_err(|e| e.to_string())?;
            ensure!(
                r.iterations <= n + 1,
                "N = {n}, a = {a}: {} steps",
                r.iterations
            );
            ensure!(r.converged(), "N = {n}, a = {a}: no termination");
            worst = worst.max(r.iterations);
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("{runs} runs, max {worst} steps, {elapsed:?}"))
}

fn c05_contraction() -> Outcome {
    let mut rng = rng(5);
    let mut dists: Vec<Distribution> = analytic_zoo().into_iter().map(Into::into).collect();
    for n in [1, 3, 17, 250, 1000] {
        dists.push(random_sample(&mut rng, n, -100.0, 100.0).into());
    }
    ensure!(dists.len() == 10, "need 10 distributions");
    let mut checks = 0;
    for d in &dists {
        for a in [0.05, 0.2, 0.45, 0.55, 0.8, 0.95] {
            let a = alpha(a);
            let c = a.contraction_constant();
            for _ in 0..1000 {
                let x = d.mean() + rng.random_range(-150.0..150.0);
                let y = d.mean() + rng.random_range(-150.0..150.0);
                let lhs = (phi_alpha(a, x, d) - phi_alpha(a, y, d)).abs();
                ensure!(
                    lhs <= c * (x - y).abs() + 1e-12,
                    "a = {a}, x = {x}, y = {y}: {lhs}"
                );
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} pairs"))
}

fn c06_overshoot_monotone() -> Outcome {
    let mut rng = rng(6);
    let mut dists: Vec<Distribution> = analytic_zoo().into_iter().map(Into::into).collect();
    for _ in 0..50 {
        let n = rng.random_range(1..=300);
        dists.push(random_sample(&mut rng, n, -100.0, 100.0).into());
    }
    let mut traces = 0;
    for d in &dists {
        for a in [0.01, 0.05, 0.1, 0.25, 0.4, 0.49] {
            let a = alpha(a);
            let e = reference_expectile(a, d);
            for x0 in [d.mean(), e - 30.0, e + 30.0, d.quantile(a.value())] {
                let r = solve_two_sided(a, d, x0, &traced()).map_err(|e| e.to_string())?;
                let it = r.trace.unwrap().iterates;
                for w in it[1..].windows(2) {
                    ensure!(
                        w[1] <= w[0],
                        "a = {a}, x0 = {x0}: increase {} -> {}",
                        w[0],
                        w[1]
                    );
                }
                for x in &it[1..] {
                    ensure!(*x >= e - 1e-10, "a = {a}, x0 = {x0}: {x} below e = {e}");
                }
                traces += 1;
            }
        }
    }
    Ok(format!("{traces} traces"))
}

/// Grid argmin of the quadratic loss with spacing `step` over the support.
fn grid_argmin(a: AlphaLevel, d: &EmpiricalDistribution, step: f64) -> f64 {
    let n = ((d.max() - d.min()) / step).ceil() as usize;
    (0..=n)
        .map(|i| d.min() + i as f64 * step)
        .map(|x| (x, loss(a, x, d).unwrap()))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
        .0
}

fn c07_oracle_equivalence() -> Outcome {
    let mut rng = rng(7);
    let grid = [0.01, 0.1, 0.25, 0.5, 0.75, 0.99];
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let n = rng.random_range(1..=500);
        let d: Distribution = random_sample(&mut rng, n, -100.0, 100.0).into();
        let a = alpha(grid[i % grid.len()]);
        let x0 = if rng.random_bool(0.5) {
            d.mean()
        } else {
            d.quantile(a.value())
        };
        let vals: Vec<f64> = Method::ALL
            .iter()
            .map(|&m| solve(m, a, &d, x0, &cfg).map(|r| r.value))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let s = scale(vals[0], d.mean());
        for p in &vals {
            for q in &vals {
                let dev = (p - q).abs() / s;
                worst = worst.max(dev);
                ensure!(dev <= 1e-8, "instance {i} (N = {n}, a = {a}): {vals:?}");
            }
        }
    }
    for d in analytic_zoo() {
        let d: Distribution = d.into();
        for a in grid {
            let a = alpha(a);
            let vals: Vec<f64> = [Method::OneSided, Method::TwoSided, Method::Bisection]
                .iter()
                .map(|&m| solve(m, a, &d, d.mean(), &cfg).map(|r| r.value))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let s = scale(vals[0], d.mean());
            for p in &vals {
                for q in &vals {
                    ensure!((p - q).abs() <= 1e-8 * s, "{d:?}, a = {a}: {vals:?}");
                }
            }
        }
    }
    let step = 1e-3;
    for i in 0..20 {
        let n = rng.random_range(2..=20);
        let d = random_sample(&mut rng, n, -10.0, 10.0);
        let a = alpha(rng.random_range(0.02..0.98));
        let b = solve_bisection(a, &d, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let g = grid_argmin(a, &d, step);
        ensure!(
            (b - g).abs() <= step,
            "loss instance {i}: bisection {b}, grid {g}"
        );
    }
    Ok(format!(
        "worst relative spread {worst:.2e}; loss grid agrees"
    ))
}

fn c08_reflection() -> Outcome {
    let mut rng = rng(8);
    let cfg = SolverConfig::default();
    let zoo = analytic_zoo();
    let mut above = 0;
    for i in 0..100 {
        let d: Distribution = if i % 4 == 3 {
            zoo[i % zoo.len()].into()
        } else {
            let n = rng.random_range(1..=300);
            random_sample(&mut rng, n, -100.0, 100.0).into()
        };
        let a = alpha(rng.random_range(0.01..0.99));
        if a.value() > 0.5 {
            above += 1;
        }
        let methods: &[Method] = match d {
            Distribution::Empirical(_) => &Method::ALL,
            Distribution::Analytic(_) => &[Method::OneSided, Method::TwoSided, Method::Bisection],
        };
        for &m in methods {
            let direct = solve(m, a, &d, d.mean(), &cfg)
                .map_err(|e| e.to_string())?
                .value;
            let refl = solve_reflected(m, a, &d, d.mean(), &cfg).map_err(|e| e.to_string())?;
            ensure!(
                (direct - refl).abs() <= 1e-10 * scale(direct, d.mean()),
                "instance {i}, {m}, a = {a}: {direct} vs {refl}"
            );
        }
    }
    ensure!(above > 20, "too few a > 1/2 cases: {above}");
    Ok(format!("100 pairs, {above} with a > 1/2"))
}

fn c09_normal_benchmark() -> Outcome {
    let family = AnalyticDistribution::normal(2.0, 6.0).unwrap();
    let start = Instant::now();
    let d: Distribution = EmpiricalDistribution::new(&synth::draw(&family, 1000, 42))
        .map_err(|e| e.to_string())?
        .into();
    let cfg = traced();
    let mut summary = Vec::new();
    for a in [0.1, 0.25, 0.75] {
        let a = alpha(a);
        for policy in [X0Policy::Mean, X0Policy::Quantile] {
            let x0 = policy.resolve(a, &d);
            let runs: Vec<_> = Method::ALL
                .iter()
                .map(|&m| solve(m, a, &d, x0, &cfg))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let vals: Vec<f64> = runs.iter().map(|r| r.value).collect();
            let (lo, hi) = vals
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(*v), h.max(*v))
                });
            ensure!(
                hi - lo <= 1e-8,
                "a = {a}, x0 = {policy}: spread {}",
                hi - lo
            );
            for r in runs
                .iter()
                .filter(|r| matches!(r.method, Method::TwoSided | Method::SampleTwoSided))
            {
                let it = &r.trace.as_ref().unwrap().iterates;
                // Below 1/2 the approach is from above; above 1/2 (reflected) from below.
                let monotone = if a.below_half() {
                    it[1..].windows(2).all(|w| w[1] <= w[0])
                } else {
                    it[1..].windows(2).all(|w| w[1] >= w[0])
                };
                ensure!(
                    monotone,
                    "a = {a}, {}: trace not monotone after step 1",
                    r.method
                );
            }
            if policy == X0Policy::Mean {
                let iters: Vec<String> = runs
                    .iter()
                    .map(|r| format!("{}={}", r.method, r.iterations))
                    .collect();
                summary.push(format!("a={a}: e={:.6} [{}]", vals[0], iters.join(" ")));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{elapsed:?}; {}", summary.join("; ")))
}

fn c10_degenerate() -> Outcome {
    let cfg = SolverConfig::default();
    for data in [vec![4.25; 7], vec![-3.0]] {
        let d: Distribution = EmpiricalDistribution::new(&data).unwrap().into();
        for a in [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            for m in Method::ALL {
                let r = solve(m, alpha(a), &d, d.mean(), &cfg).map_err(|e| e.to_string())?;
                ensure!(
                    r.value == data[0],
                    "{m}, a = {a}: {} != {}",
                    r.value,
                    data[0]
                );
                ensure!(
                    r.iterations <= 1,
                    "{m}, a = {a}: {} iterations",
                    r.iterations
                );
            }
        }
    }
    ensure!(
        EmpiricalDistribution::new(&[]) == Err(ExpectileError::EmptySample),
        "empty sample accepted"
    );
    Ok("constant and single-point samples solved in one step; empty rejected".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (
            "1  three-point one-sided iterates",
            c01_three_point_one_sided,
        ),
        ("2  four-point two-sided table", c02_four_point_table),
        ("3  four-step finite termination", c03_four_step_termination),
        ("4  at most N+1 two-sided steps", c04_step_bound),
        ("5  one-sided contraction bound", c05_contraction),
        ("6  two-sided overshoot and descent", c06_overshoot_monotone),
        ("7  cross-method agreement", c07_oracle_equivalence),
        ("8  reflection identity", c08_reflection),
        ("9  seeded normal(2, 6) benchmark", c09_normal_benchmark),
        ("10 degenerate inputs", c10_degenerate),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn point_mass_every_method() {
    let d: Distribution = AnalyticDistribution::point_mass(5.0).unwrap().into();
    for a in [0.1, 0.5, 0.9] {
        for m in [Method::OneSided, Method::TwoSided, Method::Bisection] {
            let r = solve(m, alpha(a), &d, 0.0, &SolverConfig::default()).unwrap();
            assert!((r.value - 5.0).abs() < 1e-10, "{m}: {}", r.value);
        }
    }
    assert_eq!(d.mean(), 5.0);
}
