//! Scores generated sets that cover fewer and fewer modes of the ring and
//! grid benchmarks, with DD and FID side by side.
//!
//! ```text
//! cargo run --release --example ring_grid_benchmark
//! ```

use dendrodist::metrics::{dd_from_pointsets, fid_from_pointsets, DdOptions};
use dendrodist::synthdata::{grid_layout, ring_layout, sample_dataset, sample_modes, split_total, ModeLayout};

fn score(name: &str, layout: &ModeLayout) -> dendrodist::Result<()> {
    let modes = layout.modes();
    let real = sample_dataset(layout, 100, 1)?;
    println!("{name}: {modes} modes, sigma={}", layout.sigma);
    println!("{:>6} {:>10} {:>10} {:>12}", "modes", "dd_mean", "dd_max", "fid");
    for k in 1..=modes {
        let mut counts = split_total(real.len(), k, modes);
        counts.resize(modes, 0);
        let fake = sample_modes(layout, &counts, 2 + k as u64)?;
        let dd = dd_from_pointsets(&real, &fake, DdOptions::require_equal())?;
        let fid = fid_from_pointsets(&real, &fake)?;
        println!(
            "{k:>6} {:>10.4} {:>10.4} {:>12.2}",
            dd.value,
            dd.aux["dd_max"].as_f64().unwrap_or(f64::NAN),
            fid.value
        );
    }
    println!();
    Ok(())
}

fn main() -> dendrodist::Result<()> {
    score("ring", &ring_layout(7, 50.0)?)?;
    score("grid", &grid_layout(9, 100.0)?)
}
