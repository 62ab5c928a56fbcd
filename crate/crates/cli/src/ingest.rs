use std::fs;
use std::path::Path;

use expectile_core::{AnalyticDistribution, Distribution, EmpiricalDistribution};

use crate::error::CliError;

/// Parse newline- and/or comma-separated numbers. A first line that does not
/// parse is taken as a header and skipped.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        let parsed: Result<Vec<f64>, &str> = tokens
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| *t))
            .collect();
        match parsed {
            Ok(values) => out.extend(values),
            Err(_) if i == 0 => continue,
            Err(token) => {
                return Err(CliError::Parse {
                    line: i + 1,
                    token: token.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_sample(path: &Path) -> Result<EmpiricalDistribution, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(EmpiricalDistribution::new(&parse_numbers(&text)?)?)
}

/// `normal:MU,SIGMA`, `uniform:A,B` or `point:C`.
pub fn parse_spec(spec: &str) -> Result<AnalyticDistribution, CliError> {
    let invalid = || CliError::InvalidSpec(spec.to_string());
    let (family, params) = spec.split_once(':').ok_or_else(invalid)?;
    let params: Vec<f64> = params
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid())?;
    let dist = match (family.trim(), params.as_slice()) {
        ("normal", &[m, s]) => AnalyticDistribution::normal(m, s),
        ("uniform", &[a, b]) => AnalyticDistribution::uniform(a, b),
        ("point", &[c]) => AnalyticDistribution::point_mass(c),
        _ => return Err(invalid()),
    };
    dist.map_err(|_| invalid())
}

pub enum Source<'a> {
    File(&'a Path),
    Spec(&'a str),
}

pub fn ingest(source: Source<'_>) -> Result<Distribution, CliError> {
    match source {
        Source::File(p) => Ok(read_sample(p)?.into()),
        Source::Spec(s) => Ok(parse_spec(s)?.into()),
    }
}
