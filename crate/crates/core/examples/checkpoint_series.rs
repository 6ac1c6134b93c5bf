//! Evaluates a series of saved "checkpoints" against a reference set. The
//! checkpoints blend uniform noise into the real points with a shrinking
//! weight, standing in for a generator that improves during training.
//!
//! ```text
//! cargo run --release --example checkpoint_series
//! ```

use rand::Rng;

use dendrodist::harness::checkpoint_series_eval;
use dendrodist::ingest::{save_points, PointFormat};
use dendrodist::metrics::DdOptions;
use dendrodist::rng::seeded;
use dendrodist::synthdata::{ring_layout, sample_dataset};
use dendrodist::{MetricName, PointSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let real = sample_dataset(&ring_layout(7, 50.0)?, 50, 7)?;
    let dir = std::env::temp_dir().join("dendrodist-checkpoints");
    std::fs::create_dir_all(&dir)?;

    let mut paths = Vec::new();
    for (i, weight) in [1.0, 0.8, 0.6, 0.4, 0.2, 0.0].into_iter().enumerate() {
        let mut rng = seeded(100);
        let data = real
            .as_slice()
            .iter()
            .map(|&v| weight * rng.random_range(-60.0..60.0) + (1.0 - weight) * v)
            .collect();
        let path = dir.join(format!("step{i}.f64bin"));
        save_points(&PointSet::new(data, 2, None)?, &path, PointFormat::F64Bin)?;
        paths.push(path);
    }

    let metrics = [MetricName::DdMean, MetricName::Fid];
    let result = checkpoint_series_eval(&real, &paths, &metrics, DdOptions::require_equal())?;
    for row in result.rows() {
        println!("checkpoint {} {:<8} {:.4}", row.repetition, row.metric_name, row.value);
    }
    Ok(())
}
