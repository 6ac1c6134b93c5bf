//! Simulated mode collapse: subsample a labelled reference set down to its
//! first `k` modes and track the metrics across repetitions.
//!
//! ```text
//! cargo run --release --example mode_drop
//! ```

use dendrodist::harness::{mode_drop_sweep, summarize, ModeDropConfig};
use dendrodist::synthdata::{ring_layout, sample_dataset};
use dendrodist::MetricName;

fn main() -> dendrodist::Result<()> {
    let real = sample_dataset(&ring_layout(7, 50.0)?, 100, 3)?;
    let mut cfg = ModeDropConfig::new(vec![MetricName::DdMean, MetricName::Fid], 10, 42);
    // Drop the modes in a scattered order rather than walking around the ring.
    cfg.mode_order = Some(vec![0, 3, 6, 2, 5, 1, 4]);
    let result = mode_drop_sweep(&real, &cfg)?;
    println!("{} rows", result.rows().len());
    for row in summarize(&result)? {
        println!(
            "{:<8} modes={} mean={:.4} std={:.4}",
            row.metric_name,
            row.mode_count.unwrap_or_default(),
            row.mean,
            row.std
        );
    }
    Ok(())
}
