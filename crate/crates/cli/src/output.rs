use std::io::Write;

use serde::Serialize;

use crate::error::CliError;

/// Round to 15 significant digits so output is stable and compact.
pub fn sig15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, records: &[T]) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, records)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<T: Serialize>(out: &mut dyn Write, records: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    records: &[T],
) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, records),
        Format::Csv => write_csv(out, records),
    }
}
