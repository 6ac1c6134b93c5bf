//! Saving and loading point sets (CSV and binary), linkage tables and
//! metric reports.
//!
//! ```text
//! cargo run --example file_formats
//! ```

use dendrodist::clustering::{pairwise_distances, single_linkage};
use dendrodist::ingest::{
    load_linkage, load_metric_report, load_points_auto, save_linkage, save_points, save_report, PointFormat,
    ReportFormat,
};
use dendrodist::metrics::{dd_from_pointsets, DdOptions};
use dendrodist::synthdata::{grid_layout, sample_dataset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dendrodist-formats");
    std::fs::create_dir_all(&dir)?;
    let x = sample_dataset(&grid_layout(4, 10.0)?, 3, 9)?;

    for (format, name) in [(PointFormat::Csv, "points.csv"), (PointFormat::F64Bin, "points.f64bin")] {
        let path = dir.join(name);
        save_points(&x, &path, format)?;
        let back = load_points_auto(&path)?;
        let size = std::fs::metadata(&path)?.len();
        println!("{name}: {size} bytes, identical: {}", back.as_slice() == x.as_slice());
    }
    println!(
        "{}",
        std::fs::read_to_string(dir.join("points.csv")).unwrap_or_default()
    );

    let linkage = dir.join("linkage.csv");
    let dendro = single_linkage(&pairwise_distances(&x)?)?;
    save_linkage(&dendro, &linkage)?;
    println!("linkage round trip: {}", load_linkage(&linkage)? == dendro);

    let report = dd_from_pointsets(&x, &x, DdOptions::require_equal())?;
    let path = dir.join("report.json");
    save_report(&report, &path, ReportFormat::Json)?;
    println!("{}", std::fs::read_to_string(&path).unwrap_or_default());
    println!("report round trip: {}", load_metric_report(&path)? == report);
    Ok(())
}
