use std::fmt::Write as _;
use std::path::Path;

use super::{read_csv, write_file};
use crate::error::{Error, Result};
use crate::types::{Dendrogram, Merge};

const HEADER: &str = "left_id,right_id,height,size";

/// Writes the linkage table: one `left_id,right_id,height,size` row per merge
/// in merge order. Leaves are `0..n`, merge `s` creates cluster `n + s`.
pub fn save_linkage(dendro: &Dendrogram, path: &Path) -> Result<()> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for m in dendro.merges() {
        writeln!(out, "{},{},{},{}", m.left, m.right, m.height, m.size).unwrap();
    }
    write_file(path, out.as_bytes())
}

pub fn load_linkage(path: &Path) -> Result<Dendrogram> {
    let records = read_csv(path)?;
    let Some((header, rows)) = records.split_first() else {
        return Err(Error::format(path, "empty linkage table"));
    };
    if header.join(",") != HEADER {
        return Err(Error::format(path, format!("expected header {HEADER:?}")));
    }
    let mut merges = Vec::with_capacity(rows.len());
    for (i, rec) in rows.iter().enumerate() {
        if rec.len() != 4 {
            return Err(Error::format(
                path,
                format!("row {i} has {} fields, expected 4", rec.len()),
            ));
        }
        let id = |j: usize| {
            rec[j]
                .parse::<usize>()
                .map_err(|_| Error::format(path, format!("row {i}: bad integer {:?}", rec[j])))
        };
        let height: f64 = rec[2]
            .parse()
            .map_err(|_| Error::format(path, format!("row {i}: bad height {:?}", rec[2])))?;
        merges.push(Merge {
            left: id(0)?,
            right: id(1)?,
            height,
            size: id(3)?,
        });
    }
    Dendrogram::new(rows.len() + 1, merges).map_err(|e| Error::format(path, e.to_string()))
}
