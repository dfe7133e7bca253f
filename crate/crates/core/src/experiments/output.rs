use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::sweep::SweepResult;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 9] = [
    "scheme",
    "axis_name",
    "axis_value",
    "M",
    "beta",
    "mean_min_rate_bps",
    "stderr_bps",
    "drops",
    "master_seed",
];

/// Writes the sweep as CSV, one row per (scheme, axis value, M, beta).
///
/// Floats use Rust's shortest round-trip formatting, so parsing a field
/// recovers the exact `f64` that was written.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    let seed = result.master_seed.to_string();
    for row in &result.rows {
        writer.write_record([
            row.scheme.name(),
            result.axis.name(),
            &row.axis_value.to_string(),
            &row.users.to_string(),
            &row.beta.to_string(),
            &row.mean_min_rate_bps.to_string(),
            &row.stderr_bps.to_string(),
            &row.drops.to_string(),
            &seed,
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_csv(result, BufWriter::new(file)).map_err(|source| Error::Csv { path: path.to_path_buf(), source })
}

/// JSON mirror of the CSV with the same fields.
pub fn emit_json(result: &SweepResult, path: &Path) -> Result<()> {
    let rows: Vec<serde_json::Value> = result
        .rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "scheme": row.scheme.name(),
                "axis_name": result.axis.name(),
                "axis_value": row.axis_value,
                "M": row.users,
                "beta": row.beta,
                "mean_min_rate_bps": row.mean_min_rate_bps,
                "stderr_bps": row.stderr_bps,
                "drops": row.drops,
                "master_seed": result.master_seed,
            })
        })
        .collect();
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, &rows).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
