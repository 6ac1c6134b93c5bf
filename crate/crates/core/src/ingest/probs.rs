use std::path::Path;

use super::{looks_like_header, read_csv};
use crate::error::{Error, Result};
use crate::metrics::ProbabilityMatrix;

/// Loads an `n × c` CSV of class probabilities (optional header row).
///
/// Every row must sum to 1 within [`ROW_SUM_TOL`](crate::metrics::ROW_SUM_TOL);
/// violations name the row and its sum.
pub fn load_probs(path: &Path) -> Result<ProbabilityMatrix> {
    let records = read_csv(path)?;
    let rows = match records.first() {
        Some(first) if looks_like_header(first) => &records[1..],
        _ => &records[..],
    };
    if rows.is_empty() {
        return Err(Error::format(path, "no probability rows"));
    }
    let c = rows[0].len();
    let mut data = Vec::with_capacity(rows.len() * c);
    for (i, rec) in rows.iter().enumerate() {
        if rec.len() != c {
            return Err(Error::format(
                path,
                format!("row {i} has {} columns, expected {c}", rec.len()),
            ));
        }
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::format(path, format!("row {i}, column {j}: cannot parse {field:?}")))?;
            if !v.is_finite() {
                return Err(Error::format(
                    path,
                    format!("row {i}, column {j}: non-finite value {v}"),
                ));
            }
            data.push(v);
        }
    }
    ProbabilityMatrix::new(data, c).map_err(|e| Error::format(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_uniform_and_one_hot() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        std::fs::write(&p, "0.2,0.2,0.2,0.2,0.2\n".repeat(3)).unwrap();
        let m = load_probs(&p).unwrap();
        assert_eq!((m.len(), m.classes()), (3, 5));

        std::fs::write(&p, "c0,c1,c2\n1,0,0\n0,0,1\n").unwrap();
        assert_eq!(load_probs(&p).unwrap().len(), 2);
    }

    #[test]
    fn names_unnormalized_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        std::fs::write(&p, "0.5,0.5\n0.4,0.4\n").unwrap();
        let msg = load_probs(&p).unwrap_err().to_string();
        assert!(msg.contains("row 1") && msg.contains("0.8"), "{msg}");
    }
}
