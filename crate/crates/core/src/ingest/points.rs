use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{looks_like_header, read_csv, write_file};
use crate::error::{Error, Result};
use crate::types::PointSet;

/// Magic bytes opening every binary point file.
pub const F64BIN_MAGIC: &[u8; 4] = b"DDE1";
const F64BIN_HEADER_LEN: usize = 4 + 4 + 4 + 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointFormat {
    /// One row per point, optional header, optional trailing `label` column.
    Csv,
    /// `DDE1`, u32 n, u32 d, u8 has_labels, n·d f64 row-major, then n u32
    /// labels when flagged. All little-endian.
    F64Bin,
}

impl PointFormat {
    /// `.bin` / `.f64bin` select the binary format; anything else is CSV.
    pub fn from_path(path: &Path) -> PointFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("f64bin") => PointFormat::F64Bin,
            _ => PointFormat::Csv,
        }
    }
}

/// Loads a point file, choosing the format from its leading bytes.
pub fn load_points_auto(path: &Path) -> Result<PointSet> {
    let mut magic = [0u8; 4];
    let is_binary = std::fs::File::open(path)
        .and_then(|mut f| std::io::Read::read_exact(&mut f, &mut magic))
        .is_ok()
        && &magic == F64BIN_MAGIC;
    load_points(
        path,
        if is_binary {
            PointFormat::F64Bin
        } else {
            PointFormat::Csv
        },
    )
}

pub fn load_points(path: &Path, format: PointFormat) -> Result<PointSet> {
    let set = match format {
        PointFormat::Csv => load_csv(path)?,
        PointFormat::F64Bin => {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            decode_f64bin(path, &bytes)?
        }
    };
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    Ok(set.with_name(stem))
}

fn load_csv(path: &Path) -> Result<PointSet> {
    let records = read_csv(path)?;
    let mut rows = records.as_slice();
    let mut has_labels = false;
    let mut width = None;
    if let Some(first) = rows.first() {
        if looks_like_header(first) {
            has_labels = first.last().is_some_and(|h| h == "label");
            width = Some(first.len());
            rows = &rows[1..];
        }
    }
    let width = width.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    let d = width - usize::from(has_labels);
    if d == 0 {
        return Err(Error::format(path, "no coordinate columns"));
    }

    let mut points = Vec::with_capacity(rows.len() * d);
    let mut labels = Vec::with_capacity(if has_labels { rows.len() } else { 0 });
    for (i, rec) in rows.iter().enumerate() {
        if rec.len() != width {
            return Err(Error::format(
                path,
                format!("row {i} has {} fields, expected {width}", rec.len()),
            ));
        }
        for (j, field) in rec[..d].iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::format(path, format!("row {i}, column {j}: cannot parse {field:?}")))?;
            if !v.is_finite() {
                return Err(Error::format(
                    path,
                    format!("row {i}, column {j}: non-finite value {v}"),
                ));
            }
            points.push(v);
        }
        if has_labels {
            let field = &rec[d];
            let label: u32 = field
                .parse()
                .map_err(|_| Error::format(path, format!("row {i}: label {field:?} is not a non-negative integer")))?;
            labels.push(label);
        }
    }
    PointSet::new(points, d, has_labels.then_some(labels)).map_err(|e| Error::format(path, e.to_string()))
}

fn decode_f64bin(path: &Path, bytes: &[u8]) -> Result<PointSet> {
    if bytes.len() < F64BIN_HEADER_LEN || &bytes[..4] != F64BIN_MAGIC {
        return Err(Error::format(path, "missing DDE1 magic header"));
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let has_labels = match bytes[12] {
        0 => false,
        1 => true,
        other => {
            return Err(Error::format(
                path,
                format!("has_labels flag is {other}, expected 0 or 1"),
            ))
        }
    };
    let expected = n
        .checked_mul(d)
        .and_then(|nd| nd.checked_mul(8))
        .and_then(|b| b.checked_add(if has_labels { n * 4 } else { 0 }))
        .and_then(|b| b.checked_add(F64BIN_HEADER_LEN))
        .ok_or_else(|| Error::format(path, "header sizes overflow"))?;
    if bytes.len() != expected {
        return Err(Error::format(
            path,
            format!("expected {expected} bytes for n={n}, d={d}, found {}", bytes.len()),
        ));
    }
    let body = &bytes[F64BIN_HEADER_LEN..];
    let (coords, tail) = body.split_at(n * d * 8);
    let points: Vec<f64> = coords
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
        return Err(Error::format(
            path,
            format!(
                "row {}, column {}: non-finite value {}",
                pos / d.max(1),
                pos % d.max(1),
                points[pos]
            ),
        ));
    }
    let labels = has_labels.then(|| {
        tail.chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect()
    });
    PointSet::new(points, d, labels).map_err(|e| Error::format(path, e.to_string()))
}

pub fn save_points(x: &PointSet, path: &Path, format: PointFormat) -> Result<()> {
    x.validate()?;
    let bytes = match format {
        PointFormat::Csv => encode_csv(x).into_bytes(),
        PointFormat::F64Bin => encode_f64bin(path, x)?,
    };
    write_file(path, &bytes)
}

fn encode_csv(x: &PointSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..x.dim()).map(|j| format!("x{j}")).collect();
    out.push_str(&header.join(","));
    if x.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, row) in x.rows().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        if let Some(labels) = x.labels() {
            write!(out, ",{}", labels[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

fn encode_f64bin(path: &Path, x: &PointSet) -> Result<Vec<u8>> {
    let to_u32 = |v: usize, what: &str| {
        u32::try_from(v).map_err(|_| Error::format(path, format!("{what}={v} does not fit in u32")))
    };
    let (n, d) = (to_u32(x.len(), "n")?, to_u32(x.dim(), "d")?);
    let mut out = Vec::with_capacity(F64BIN_HEADER_LEN + x.as_slice().len() * 8 + x.len() * 4);
    out.extend_from_slice(F64BIN_MAGIC);
    out.extend_from_slice(&n.to_le_bytes());
    out.extend_from_slice(&d.to_le_bytes());
    out.push(u8::from(x.labels().is_some()));
    for v in x.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for l in x.labels().into_iter().flatten() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headered_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "x,y\n0,0\n3,4\n").unwrap();
        let x = load_points(&p, PointFormat::Csv).unwrap();
        assert_eq!((x.len(), x.dim()), (2, 2));
        assert_eq!(x.row(1), &[3.0, 4.0]);
        assert!(x.labels().is_none());
        assert_eq!(x.name(), "a");
    }

    #[test]
    fn parses_headerless_and_labelled_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.csv");
        std::fs::write(&p, "1.5,2\n-3,4e2\n").unwrap();
        let x = load_points(&p, PointFormat::Csv).unwrap();
        assert_eq!(x.as_slice(), &[1.5, 2.0, -3.0, 400.0]);

        std::fs::write(&p, "x0,label\n1.0,3\n2.0,0\n").unwrap();
        let x = load_points(&p, PointFormat::Csv).unwrap();
        assert_eq!(x.dim(), 1);
        assert_eq!(x.labels().unwrap(), &[3, 0]);
    }

    #[test]
    fn csv_errors_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "x,y\n0,0\n1,2,3\n").unwrap();
        let msg = load_points(&p, PointFormat::Csv).unwrap_err().to_string();
        assert!(msg.contains("row 1"), "{msg}");

        std::fs::write(&p, "x,y\n0,0\n1,NaN\n").unwrap();
        let msg = load_points(&p, PointFormat::Csv).unwrap_err().to_string();
        assert!(msg.contains("row 1") && msg.contains("non-finite"), "{msg}");

        std::fs::write(&p, "x,label\n0,1\n1,-2\n").unwrap();
        assert!(load_points(&p, PointFormat::Csv).is_err());
    }

    #[test]
    fn binary_layout_is_exact() {
        let x = PointSet::new(vec![1.0, -2.5, 0.0, 7.0], 2, Some(vec![4, 9])).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        save_points(&x, &p, PointFormat::F64Bin).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(&bytes[..4], b"DDE1");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &2u32.to_le_bytes());
        assert_eq!(bytes[12], 1);
        assert_eq!(&bytes[13..21], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[45..49], &4u32.to_le_bytes());
        assert_eq!(bytes.len(), 13 + 32 + 8);

        let unlabeled = PointSet::new(vec![1.0, 2.0], 1, None).unwrap();
        save_points(&unlabeled, &p, PointFormat::F64Bin).unwrap();
        assert_eq!(std::fs::read(&p).unwrap()[12], 0);
    }

    #[test]
    fn binary_rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        std::fs::write(&p, b"XXXX\0\0\0\0\0\0\0\0\0").unwrap();
        assert!(load_points(&p, PointFormat::F64Bin)
            .unwrap_err()
            .to_string()
            .contains("magic"));

        let x = PointSet::new(vec![1.0, 2.0, 3.0], 1, None).unwrap();
        save_points(&x, &p, PointFormat::F64Bin).unwrap();
        let mut bytes = std::fs::read(&p).unwrap();
        bytes.pop();
        std::fs::write(&p, &bytes).unwrap();
        assert!(load_points(&p, PointFormat::F64Bin).is_err());

        let mut bytes = std::fs::read(&p).unwrap();
        bytes.push(0);
        bytes[13 + 8..13 + 16].copy_from_slice(&f64::INFINITY.to_le_bytes());
        std::fs::write(&p, &bytes).unwrap();
        let msg = load_points(&p, PointFormat::F64Bin).unwrap_err().to_string();
        assert!(msg.contains("row 1"), "{msg}");
    }

    #[test]
    fn labelled_set_gains_label_column() {
        let x = PointSet::new(vec![0.1, 0.2], 1, Some(vec![0, 1])).unwrap();
        assert_eq!(encode_csv(&x), "x0,label\n0.1,0\n0.2,1\n");
    }

    #[test]
    fn auto_detects_format() {
        let x = PointSet::new(vec![0.5, 1.0 / 3.0, 2.0, 8.0], 2, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("noext");
        save_points(&x, &p, PointFormat::F64Bin).unwrap();
        assert_eq!(load_points_auto(&p).unwrap().as_slice(), x.as_slice());
        save_points(&x, &p, PointFormat::Csv).unwrap();
        assert_eq!(load_points_auto(&p).unwrap().as_slice(), x.as_slice());
    }
}
