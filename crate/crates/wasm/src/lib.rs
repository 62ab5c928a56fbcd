//! Browser bindings for the expectile demo page. Every entry point takes plain
//! numbers and returns JSON text, so the page stays framework-free.

use expectile_core::sample::map_curve;
use expectile_core::{
    solve, synth, AlphaLevel, AnalyticDistribution, Distribution, EmpiricalDistribution, Method,
    SolverConfig, X0Policy,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Run {
    pub alpha: f64,
    pub method: Method,
    pub value: f64,
    pub iterations: usize,
    pub termination: String,
    pub foc_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct Trace {
    pub alpha: f64,
    pub method: Method,
    pub x0: f64,
    pub value: f64,
    pub termination: String,
    pub iterates: Vec<f64>,
    pub residuals: Vec<f64>,
}

fn sample(data: &[f64]) -> Result<Distribution, String> {
    Ok(EmpiricalDistribution::new(data)
        .map_err(|e| e.to_string())?
        .into())
}

fn alpha(a: f64) -> Result<AlphaLevel, String> {
    AlphaLevel::new(a).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// All methods at every level; `x0` is "mean", "quantile" or a number.
pub fn compute_json(data: &[f64], alphas: &[f64], x0: &str) -> Result<String, String> {
    let d = sample(data)?;
    let policy: X0Policy = x0.parse()?;
    let cfg = SolverConfig::default();
    let mut runs = Vec::new();
    for &a in alphas {
        let a = alpha(a)?;
        let start = policy.resolve(a, &d);
        for m in Method::ALL {
            let r = solve(m, a, &d, start, &cfg).map_err(|e| e.to_string())?;
            runs.push(Run {
                alpha: a.value(),
                method: m,
                value: r.value,
                iterations: r.iterations,
                termination: r.termination.to_string(),
                foc_residual: r.foc_residual,
            });
        }
    }
    to_json(&runs)
}

/// Iterates and residuals of one run, starting point included.
pub fn trace_json(data: &[f64], a: f64, method: &str, x0: &str) -> Result<String, String> {
    let d = sample(data)?;
    let a = alpha(a)?;
    let method: Method = method.parse()?;
    let policy: X0Policy = x0.parse()?;
    let start = policy.resolve(a, &d);
    let r = solve(
        method,
        a,
        &d,
        start,
        &SolverConfig::default().with_trace(true),
    )
    .map_err(|e| e.to_string())?;
    let t = r.trace.expect("trace requested");
    to_json(&Trace {
        alpha: a.value(),
        method,
        x0: start,
        value: r.value,
        termination: r.termination.to_string(),
        iterates: t.iterates,
        residuals: t.residuals,
    })
}

/// Sampled psi(x) - x and phi(x) over the data range.
pub fn curve_json(data: &[f64], a: f64, points: usize) -> Result<String, String> {
    let d = EmpiricalDistribution::new(data).map_err(|e| e.to_string())?;
    to_json(&map_curve(alpha(a)?, &d, points))
}

pub fn normal_sample(mu: f64, sigma: f64, n: usize, seed: u64) -> Result<Vec<f64>, String> {
    let family = AnalyticDistribution::normal(mu, sigma).map_err(|e| e.to_string())?;
    Ok(synth::draw(&family, n, seed))
}

#[wasm_bindgen]
pub fn compute(data: &[f64], alphas: &[f64], x0: &str) -> Result<String, JsError> {
    compute_json(data, alphas, x0).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trace(data: &[f64], alpha: f64, method: &str, x0: &str) -> Result<String, JsError> {
    trace_json(data, alpha, method, x0).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn curve(data: &[f64], alpha: f64, points: usize) -> Result<String, JsError> {
    curve_json(data, alpha, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn synth_normal(mu: f64, sigma: f64, n: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    normal_sample(mu, sigma, n, seed).map_err(|e| JsError::new(&e))
}
