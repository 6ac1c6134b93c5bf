//! File formats: point sets (CSV and `f64bin`), class-probability CSVs,
//! linkage tables, and metric / sweep reports.
//!
//! Reals are written with Rust's shortest round-trip formatting, so every
//! CSV save/load pair reproduces the exact 64-bit values; the binary format
//! is bitwise.

mod linkage;
mod points;
mod probs;
mod report;

use std::path::Path;

pub use linkage::{load_linkage, save_linkage};
pub use points::{load_points, load_points_auto, save_points, PointFormat, F64BIN_MAGIC};
pub use probs::load_probs;
pub use report::{
    load_metric_report, load_sweep_csv, load_sweep_json, save_report, save_summary, Report, ReportFormat,
    SWEEP_CSV_HEADER,
};

use crate::error::{Error, Result};

/// Reads every CSV record as trimmed strings. Records may be ragged; callers
/// check widths so errors can name the row.
fn read_csv(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        out.push(rec.iter().map(str::to_owned).collect());
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    }
}

/// A first record counts as a header when any field is not a number.
fn looks_like_header(record: &[String]) -> bool {
    record.iter().any(|f| f.parse::<f64>().is_err())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
