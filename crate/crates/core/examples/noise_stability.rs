//! Jitters the mode means by `alpha · L` and compares how much DD and FID
//! vary across repetitions (relative standard deviation per mode count).
//!
//! ```text
//! cargo run --release --example noise_stability
//! ```

use dendrodist::harness::{noise_sweep, summarize, NoiseConfig};
use dendrodist::MetricName;

fn main() -> dendrodist::Result<()> {
    let metrics = vec![MetricName::DdMean, MetricName::Fid];
    for cfg in [
        NoiseConfig::ring(vec![0.2], metrics.clone(), 10, 2024),
        NoiseConfig::grid(vec![0.2], metrics.clone(), 10, 2024),
    ] {
        let summary = summarize(&noise_sweep(&cfg)?)?;
        println!("{:?}, alpha=0.2", cfg.kind);
        println!("{:>6} {:>10} {:>10}", "modes", "rsd dd", "rsd fid");
        for k in 1..=cfg.modes {
            let rsd = |m: MetricName| {
                summary
                    .iter()
                    .find(|r| r.metric_name == m && r.mode_count == Some(k))
                    .map(|r| r.relative_std())
                    .unwrap_or(f64::NAN)
            };
            println!(
                "{k:>6} {:>10.4} {:>10.4}",
                rsd(MetricName::DdMean),
                rsd(MetricName::Fid)
            );
        }
        println!();
    }
    Ok(())
}
