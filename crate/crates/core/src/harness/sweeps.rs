use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::seed::{derive_seed, Stream, DERIVATION};
use super::{SweepResult, SweepRow};
use crate::error::{Error, Result};
use crate::ingest::load_points_auto;
use crate::metrics::{
    agglomerative_distances, align_sizes, dendrogram_distance, dendrogram_distance_max, fit_gaussian, frechet_distance,
    AlignStrategy, DdOptions,
};
use crate::rng;
use crate::synthdata::{
    grid_layout, perturb_modes, ring_layout, sample_dataset, sample_modes, split_total, LayoutKind,
    DEFAULT_GRID_LENGTH, DEFAULT_GRID_MODES, DEFAULT_N_PER_MODE, DEFAULT_RING_MODES, DEFAULT_RING_RADIUS,
};
use crate::types::{GaussianFit, MetricName, PointSet};

fn check_metrics(metrics: &[MetricName]) -> Result<()> {
    if metrics.is_empty() {
        return Err(Error::invalid("sweep", "no metrics requested"));
    }
    if metrics.contains(&MetricName::InceptionScore) {
        return Err(Error::invalid(
            "sweep",
            "inception_score needs class probabilities, not point sets; use inception_score directly",
        ));
    }
    for (i, m) in metrics.iter().enumerate() {
        if metrics[..i].contains(m) {
            return Err(Error::invalid("sweep", format!("metric {m} requested twice")));
        }
    }
    Ok(())
}

fn check_repetitions(repetitions: usize) -> Result<()> {
    if repetitions == 0 {
        return Err(Error::invalid("sweep", "repetitions must be at least 1"));
    }
    Ok(())
}

/// A reference set with its dendrogram heights and Gaussian fit computed once.
struct Reference<'a> {
    set: &'a PointSet,
    heights: Option<Vec<f64>>,
    fit: Option<GaussianFit>,
}

impl<'a> Reference<'a> {
    fn new(set: &'a PointSet, metrics: &[MetricName]) -> Result<Self> {
        let needs_dd = metrics
            .iter()
            .any(|m| matches!(m, MetricName::DdMean | MetricName::DdMax));
        Ok(Reference {
            set,
            heights: needs_dd.then(|| agglomerative_distances(set)).transpose()?,
            fit: metrics
                .contains(&MetricName::Fid)
                .then(|| fit_gaussian(set))
                .transpose()?,
        })
    }

    /// Metric values in `metrics` order. Dendrogram metrics compare
    /// size-aligned sets; the Fréchet distance uses both sets in full.
    fn evaluate(&self, metrics: &[MetricName], fake: &PointSet, align: AlignStrategy) -> Result<Vec<f64>> {
        let mut dd: Option<(f64, f64)> = None;
        if let Some(full) = &self.heights {
            let (real, model, subsampled) = align_sizes(self.set, fake, align)?;
            let real_heights = if subsampled && real.len() != self.set.len() {
                agglomerative_distances(&real)?
            } else {
                full.clone()
            };
            let fake_heights = agglomerative_distances(&model)?;
            dd = Some((
                dendrogram_distance(&real_heights, &fake_heights)?,
                dendrogram_distance_max(&real_heights, &fake_heights)?,
            ));
        }
        let fid = match &self.fit {
            Some(fit) => Some(frechet_distance(fit, &fit_gaussian(fake)?)?),
            None => None,
        };
        Ok(metrics
            .iter()
            .map(|m| match m {
                MetricName::DdMean => dd.unwrap().0,
                MetricName::DdMax => dd.unwrap().1,
                MetricName::Fid => fid.unwrap(),
                MetricName::InceptionScore => unreachable!("rejected by check_metrics"),
            })
            .collect())
    }
}

/// Settings for [`mode_drop_sweep`]. `None` fields resolve to defaults that
/// are written into the result's config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDropConfig {
    pub metrics: Vec<MetricName>,
    /// Labels in the order they are kept; the first `k` form the `k`-mode
    /// set. Defaults to ascending label order, so the highest label is dropped
    /// first.
    pub mode_order: Option<Vec<u32>>,
    /// Size of every simulated generated set. Defaults to the number of points
    /// available at the smallest requested mode count.
    pub n_total: Option<usize>,
    /// Mode counts to evaluate; defaults to `1..=K`.
    pub mode_counts: Option<Vec<usize>>,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl ModeDropConfig {
    pub fn new(metrics: Vec<MetricName>, repetitions: usize, master_seed: u64) -> Self {
        ModeDropConfig {
            metrics,
            mode_order: None,
            n_total: None,
            mode_counts: None,
            repetitions,
            master_seed,
        }
    }
}

/// Simulated mode collapse on a labelled reference set.
///
/// For each mode count `k` and repetition, draws a generated set of
/// `n_total` points from the first `k` labels of the mode order and scores it
/// against the full reference. When `n_total` is below the reference size,
/// dendrogram metrics compare against a seeded subsample of the reference.
pub fn mode_drop_sweep(real: &PointSet, cfg: &ModeDropConfig) -> Result<SweepResult> {
    check_metrics(&cfg.metrics)?;
    check_repetitions(cfg.repetitions)?;
    let labels = real
        .labels()
        .ok_or_else(|| Error::invalid("mode-drop sweep", "the reference set has no labels"))?;
    let present = real.distinct_labels();
    if present.len() < 2 {
        return Err(Error::invalid(
            "mode-drop sweep",
            "the reference set needs at least 2 labels",
        ));
    }

    let order = cfg.mode_order.clone().unwrap_or_else(|| present.clone());
    if order.is_empty() {
        return Err(Error::invalid("mode-drop sweep", "empty mode order"));
    }
    for (i, l) in order.iter().enumerate() {
        if present.binary_search(l).is_err() {
            return Err(Error::UnknownLabel(*l));
        }
        if order[..i].contains(l) {
            return Err(Error::invalid(
                "mode-drop sweep",
                format!("label {l} repeated in mode order"),
            ));
        }
    }
    let k_max = order.len();
    let counts = cfg.mode_counts.clone().unwrap_or_else(|| (1..=k_max).collect());
    if counts.is_empty() || counts.iter().any(|&k| k == 0 || k > k_max) {
        return Err(Error::invalid(
            "mode-drop sweep",
            format!("mode counts must lie in 1..={k_max}, got {counts:?}"),
        ));
    }
    let available = |k: usize| labels.iter().filter(|l| order[..k].contains(l)).count();
    let n_total = match cfg.n_total {
        Some(n) => n,
        None => available(*counts.iter().min().unwrap()),
    };

    let reference = Reference::new(real, &cfg.metrics)?;
    let master = cfg.master_seed;
    let cells: Vec<(usize, usize)> = counts
        .iter()
        .flat_map(|&k| (0..cfg.repetitions).map(move |rep| (k, rep)))
        .collect();
    let rows: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(k, rep)| {
            let fake_seed = derive_seed(master, Stream::FakeSample, 0, k, rep)?;
            let sub_seed = derive_seed(master, Stream::Subsample, 0, k, rep)?;
            let fake = crate::synthdata::drop_modes(real, &order[..k], n_total, fake_seed)?;
            let values = reference.evaluate(
                &cfg.metrics,
                &fake,
                AlignStrategy::SubsampleLarger {
                    subsample_seed: sub_seed,
                },
            )?;
            Ok(rows_for(
                "mode-drop",
                Some(k),
                None,
                rep,
                fake_seed,
                &cfg.metrics,
                values,
            ))
        })
        .collect::<Result<_>>()?;

    let config = json!({
        "experiment": "mode-drop",
        "reference": { "name": real.name(), "n": real.len(), "d": real.dim() },
        "metrics": cfg.metrics,
        "mode_order": order,
        "mode_counts": counts,
        "n_total": n_total,
        "repetitions": cfg.repetitions,
        "master_seed": master,
        "seed_derivation": DERIVATION,
        "rng": rng::GENERATOR,
        "dd_alignment": "subsample_larger",
        "covariance_estimator": "unbiased",
        "summary_std": "population",
    });
    SweepResult::new(rows.into_iter().flatten().collect(), config)
}

fn rows_for(
    experiment: &str,
    mode_count: Option<usize>,
    alpha: Option<f64>,
    repetition: usize,
    seed: u64,
    metrics: &[MetricName],
    values: Vec<f64>,
) -> Vec<SweepRow> {
    metrics
        .iter()
        .zip(values)
        .map(|(&metric_name, value)| SweepRow {
            experiment_id: experiment.to_owned(),
            mode_count,
            alpha,
            repetition,
            seed,
            metric_name,
            value,
        })
        .collect()
}

/// How large the generated set is when only `k` of `K` modes are present.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FakeSize {
    /// Same total as the reference set, split evenly over the kept modes.
    #[default]
    ConstantTotal,
    /// `n_per_mode` points for each kept mode.
    PerMode,
}

/// Settings for [`noise_sweep`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub kind: LayoutKind,
    pub modes: usize,
    /// Ring radius or grid side length.
    pub scale: f64,
    /// Mode standard deviation; defaults to `0.01 · L`.
    pub sigma: Option<f64>,
    pub alphas: Vec<f64>,
    pub metrics: Vec<MetricName>,
    pub n_per_mode: usize,
    pub fake_size: FakeSize,
    /// Mode counts to evaluate; defaults to `1..=modes`.
    pub mode_counts: Option<Vec<usize>>,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl NoiseConfig {
    /// 7-mode ring of radius 50.
    pub fn ring(alphas: Vec<f64>, metrics: Vec<MetricName>, repetitions: usize, master_seed: u64) -> Self {
        NoiseConfig {
            kind: LayoutKind::Ring,
            modes: DEFAULT_RING_MODES,
            scale: DEFAULT_RING_RADIUS,
            sigma: None,
            alphas,
            metrics,
            n_per_mode: DEFAULT_N_PER_MODE,
            fake_size: FakeSize::ConstantTotal,
            mode_counts: None,
            repetitions,
            master_seed,
        }
    }

    /// 3 × 3 grid of side 100.
    pub fn grid(alphas: Vec<f64>, metrics: Vec<MetricName>, repetitions: usize, master_seed: u64) -> Self {
        NoiseConfig {
            kind: LayoutKind::Grid,
            modes: DEFAULT_GRID_MODES,
            scale: DEFAULT_GRID_LENGTH,
            ..NoiseConfig::ring(alphas, metrics, repetitions, master_seed)
        }
    }
}

/// Mode-count curves under random mode displacement.
///
/// Each `(alpha, repetition)` pair perturbs the base layout once and samples
/// one reference set from all modes; every mode count `k` then draws a
/// generated set from the first `k` modes of that same layout.
pub fn noise_sweep(cfg: &NoiseConfig) -> Result<SweepResult> {
    check_metrics(&cfg.metrics)?;
    check_repetitions(cfg.repetitions)?;
    let mut base = match cfg.kind {
        LayoutKind::Ring => ring_layout(cfg.modes, cfg.scale)?,
        LayoutKind::Grid => grid_layout(cfg.modes, cfg.scale)?,
        LayoutKind::Custom => {
            return Err(Error::invalid("noise sweep", "layout kind must be ring or grid"));
        }
    };
    if let Some(sigma) = cfg.sigma {
        base = base.with_sigma(sigma)?;
    }
    if let Some(a) = cfg.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::invalid(
            "noise sweep",
            format!("alpha must be non-negative, got {a}"),
        ));
    }
    if cfg.alphas.is_empty() {
        return Err(Error::invalid("noise sweep", "no alphas given"));
    }
    let k_max = base.modes();
    let counts = cfg.mode_counts.clone().unwrap_or_else(|| (1..=k_max).collect());
    if counts.is_empty() || counts.iter().any(|&k| k == 0 || k > k_max) {
        return Err(Error::invalid(
            "noise sweep",
            format!("mode counts must lie in 1..={k_max}, got {counts:?}"),
        ));
    }

    let master = cfg.master_seed;
    let groups: Vec<(usize, usize)> = (0..cfg.alphas.len())
        .flat_map(|a| (0..cfg.repetitions).map(move |rep| (a, rep)))
        .collect();
    let experiment = format!("noise-{}", cfg.kind.as_str());
    let mut rows: Vec<SweepRow> = groups
        .par_iter()
        .map(|&(a, rep)| -> Result<Vec<SweepRow>> {
            let alpha = cfg.alphas[a];
            let layout = perturb_modes(&base, alpha, derive_seed(master, Stream::Perturb, a, 0, rep)?)?;
            let real = sample_dataset(
                &layout,
                cfg.n_per_mode,
                derive_seed(master, Stream::RealSample, a, 0, rep)?,
            )?;
            let reference = Reference::new(&real, &cfg.metrics)?;
            let mut out = Vec::new();
            for &k in &counts {
                let per_mode = match cfg.fake_size {
                    FakeSize::ConstantTotal => split_total(real.len(), k, k_max),
                    FakeSize::PerMode => (0..k_max).map(|i| if i < k { cfg.n_per_mode } else { 0 }).collect(),
                };
                let fake_seed = derive_seed(master, Stream::FakeSample, a, k, rep)?;
                let fake = sample_modes(&layout, &per_mode, fake_seed)?;
                let align = AlignStrategy::SubsampleLarger {
                    subsample_seed: derive_seed(master, Stream::Subsample, a, k, rep)?,
                };
                let values = reference.evaluate(&cfg.metrics, &fake, align)?;
                out.extend(rows_for(
                    &experiment,
                    Some(k),
                    Some(alpha),
                    rep,
                    fake_seed,
                    &cfg.metrics,
                    values,
                ));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // alpha index, then mode count, then repetition; metric order is kept
    let alpha_index = |r: &SweepRow| cfg.alphas.iter().position(|a| Some(*a) == r.alpha).unwrap();
    rows.sort_by_key(|r| (alpha_index(r), r.mode_count, r.repetition));

    let config = json!({
        "experiment": experiment,
        "layout": base,
        "kind": cfg.kind,
        "modes": cfg.modes,
        "scale": cfg.scale,
        "sigma": base.sigma,
        "alphas": cfg.alphas,
        "metrics": cfg.metrics,
        "n_per_mode": cfg.n_per_mode,
        "fake_size": cfg.fake_size,
        "mode_counts": counts,
        "repetitions": cfg.repetitions,
        "master_seed": master,
        "seed_derivation": DERIVATION,
        "rng": rng::GENERATOR,
        "dd_alignment": "subsample_larger",
        "covariance_estimator": "unbiased",
        "summary_std": "population",
    });
    SweepResult::new(rows, config)
}

/// Scores a sequence of saved generator outputs against one reference set.
///
/// All checkpoint files are loaded before any evaluation; an unreadable file
/// or a dimension mismatch fails the whole series.
pub fn checkpoint_series_eval<P: AsRef<Path>>(
    real: &PointSet,
    checkpoint_paths: &[P],
    metrics: &[MetricName],
    opts: DdOptions,
) -> Result<SweepResult> {
    check_metrics(metrics)?;
    if checkpoint_paths.is_empty() {
        return Err(Error::invalid("checkpoint series", "no checkpoint files given"));
    }
    let checkpoints: Vec<PointSet> = checkpoint_paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let set = load_points_auto(p)?;
            if set.dim() != real.dim() {
                return Err(Error::DimensionMismatch {
                    left_name: "reference".into(),
                    left: real.dim(),
                    right_name: p.display().to_string(),
                    right: set.dim(),
                });
            }
            Ok(set)
        })
        .collect::<Result<_>>()?;

    let reference = Reference::new(real, metrics)?;
    let seed = match opts.align {
        AlignStrategy::RequireEqual => 0,
        AlignStrategy::SubsampleLarger { subsample_seed } => subsample_seed,
    };
    let rows: Vec<Vec<SweepRow>> = checkpoints
        .par_iter()
        .enumerate()
        .map(|(i, ckpt)| {
            let values = reference.evaluate(metrics, ckpt, opts.align)?;
            Ok(rows_for("checkpoints", None, None, i, seed, metrics, values))
        })
        .collect::<Result<_>>()?;

    let paths: Vec<PathBuf> = checkpoint_paths.iter().map(|p| p.as_ref().to_path_buf()).collect();
    let config = json!({
        "experiment": "checkpoints",
        "reference": { "name": real.name(), "n": real.len(), "d": real.dim() },
        "checkpoints": paths,
        "metrics": metrics,
        "dd_options": opts,
        "covariance_estimator": "unbiased",
    });
    SweepResult::new(rows.into_iter().flatten().collect(), config)
}
