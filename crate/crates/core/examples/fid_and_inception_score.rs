//! The baseline metrics: FID between Gaussian fits of two point sets, and
//! the Inception Score of a class-probability matrix.
//!
//! ```text
//! cargo run --release --example fid_and_inception_score
//! ```

use dendrodist::metrics::{fid_from_pointsets, fit_gaussian, frechet_distance, inception_score, ProbabilityMatrix};
use dendrodist::synthdata::{ring_layout, sample_dataset};

fn main() -> dendrodist::Result<()> {
    let layout = ring_layout(7, 50.0)?;
    let real = sample_dataset(&layout, 100, 1)?;
    let fake = sample_dataset(&layout, 100, 2)?;

    let fid = fid_from_pointsets(&real, &fake)?;
    println!("fid(real, fresh sample) = {:.4}", fid.value);
    let shifted = fake.translated(&[3.0, 4.0])?;
    println!(
        "fid(real, sample shifted by (3, 4)) = {:.4}",
        fid_from_pointsets(&real, &shifted)?.value
    );

    let (a, b) = (fit_gaussian(&real)?, fit_gaussian(&fake)?);
    println!("mean of real fit = {:?}", a.mean().as_slice());
    println!("frechet_distance on the fits = {:.4}", frechet_distance(&a, &b)?);

    let confident: Vec<[f64; 4]> = (0..40)
        .map(|i| {
            let mut row = [0.02; 4];
            row[i % 4] = 0.94;
            row
        })
        .collect();
    let (mean, std) = inception_score(&ProbabilityMatrix::from_rows(&confident)?, 4)?;
    println!("inception score (confident, diverse) = {mean:.4} ± {std:.4}");

    let collapsed = vec![[0.94, 0.02, 0.02, 0.02]; 40];
    let (mean, _) = inception_score(&ProbabilityMatrix::from_rows(&collapsed)?, 1)?;
    println!("inception score (single class) = {mean:.4}");
    Ok(())
}
