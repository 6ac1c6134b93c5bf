use rand::Rng;

use dendrodist::harness::{
    checkpoint_series_eval, mode_drop_sweep, noise_sweep, FakeSize, ModeDropConfig, NoiseConfig,
};
use dendrodist::ingest::{save_points, PointFormat};
use dendrodist::metrics::DdOptions;
use dendrodist::rng::seeded;
use dendrodist::synthdata::{ring_layout, sample_dataset};
use dendrodist::{MetricName, PointSet};

fn ring(n_per_mode: usize, seed: u64) -> PointSet {
    sample_dataset(&ring_layout(7, 50.0).unwrap(), n_per_mode, seed).unwrap()
}

/// Mixes each real point with a fixed uniform-noise point: `ratio = 1` is
/// pure noise, `ratio = 0` reproduces the real set.
fn blended(real: &PointSet, ratio: f64, noise_seed: u64) -> PointSet {
    let mut rng = seeded(noise_seed);
    let data = real
        .as_slice()
        .iter()
        .map(|&v| {
            let u: f64 = rng.random_range(-60.0..60.0);
            ratio * u + (1.0 - ratio) * v
        })
        .collect();
    PointSet::new(data, real.dim(), None).unwrap()
}

#[test]
fn checkpoint_series_improves_as_noise_fades() {
    let real = ring(30, 1);
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = [1.0, 0.75, 0.5, 0.25, 0.0]
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let p = dir.path().join(format!("ck{i}.f64bin"));
            save_points(&blended(&real, r, 99), &p, PointFormat::F64Bin).unwrap();
            p
        })
        .collect();
    let result = checkpoint_series_eval(&real, &paths, &[MetricName::DdMean], DdOptions::require_equal()).unwrap();
    let values: Vec<f64> = result.rows().iter().map(|r| r.value).collect();
    assert_eq!(
        result.rows().iter().map(|r| r.repetition).collect::<Vec<_>>(),
        [0, 1, 2, 3, 4]
    );
    assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    assert_eq!(values[4], 0.0);
}

#[test]
fn checkpoint_series_fails_fast_on_a_bad_path() {
    let real = ring(10, 1);
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    save_points(&real, &good, PointFormat::Csv).unwrap();
    let paths = [good.clone(), dir.path().join("absent.csv"), good];
    let err = checkpoint_series_eval(&real, &paths, &[MetricName::DdMean], DdOptions::require_equal()).unwrap_err();
    assert!(err.to_string().contains("absent.csv"), "{err}");
}

#[test]
fn mode_drop_sweep_trends_down() {
    let real = ring(40, 2);
    let cfg = ModeDropConfig::new(vec![MetricName::DdMean, MetricName::Fid], 3, 11);
    let result = mode_drop_sweep(&real, &cfg).unwrap();
    assert_eq!(result.rows().len(), 7 * 3 * 2);
    let mean = |k| {
        let v = result.values(Some(k), None, MetricName::DdMean);
        v.iter().sum::<f64>() / v.len() as f64
    };
    assert!(mean(7) < mean(1), "{} vs {}", mean(7), mean(1));
}

#[test]
fn sweeps_are_reproducible_and_seed_sensitive() {
    let mut cfg = NoiseConfig::grid(vec![0.1], vec![MetricName::DdMax], 2, 5);
    cfg.n_per_mode = 15;
    cfg.fake_size = FakeSize::PerMode;
    let a = noise_sweep(&cfg).unwrap();
    assert_eq!(a, noise_sweep(&cfg).unwrap());
    cfg.master_seed = 6;
    assert_ne!(a.rows(), noise_sweep(&cfg).unwrap().rows());
}

#[test]
fn noise_sweep_rejects_inception_score() {
    let cfg = NoiseConfig::ring(vec![0.0], vec![MetricName::InceptionScore], 1, 1);
    assert!(noise_sweep(&cfg).is_err());
}
