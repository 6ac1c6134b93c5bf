use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::clustering::{pairwise_distances, single_linkage, DISTANCE_METRIC};
use crate::error::{Error, Result};
use crate::rng;
use crate::types::{MetricName, MetricReport, PointSet};

/// How to reconcile sets of different sizes before comparing dendrograms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "align_strategy", rename_all = "snake_case")]
pub enum AlignStrategy {
    /// Fail unless both sets have the same number of points.
    #[default]
    RequireEqual,
    /// Draw a uniform subsample, without replacement, of the larger set down to
    /// the size of the smaller one.
    SubsampleLarger { subsample_seed: u64 },
}

impl AlignStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlignStrategy::RequireEqual => "require_equal",
            AlignStrategy::SubsampleLarger { .. } => "subsample_larger",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdOptions {
    #[serde(flatten)]
    pub align: AlignStrategy,
}

impl DdOptions {
    pub fn require_equal() -> Self {
        DdOptions {
            align: AlignStrategy::RequireEqual,
        }
    }

    pub fn subsample_larger(seed: u64) -> Self {
        DdOptions {
            align: AlignStrategy::SubsampleLarger { subsample_seed: seed },
        }
    }
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Alignment {
            left: a.len() + 1,
            right: b.len() + 1,
        });
    }
    if a.is_empty() {
        return Err(Error::invalid("distance vector", "must hold at least one entry"));
    }
    for (name, v) in [("first", a), ("second", b)] {
        if let Some(i) = v.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid(
                "distance vector",
                format!("{name} vector entry {i} is {}", v[i]),
            ));
        }
        if let Some(i) = v.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::invalid(
                "distance vector",
                format!("{name} vector is not sorted ascending at index {}", i + 1),
            ));
        }
    }
    Ok(())
}

/// Mean absolute difference between two sorted agglomerative-distance vectors.
///
/// The normalizer is the vector length, `n − 1` for dendrograms over `n`
/// points, so the result is a true mean.
pub fn dendrogram_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let (total, max) = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold((0.0f64, 0.0f64), |(s, m), g| (s + g, m.max(g)));
    // summation rounding can push a mean of equal gaps one ulp past the max
    Ok((total / a.len() as f64).min(max))
}

/// Largest absolute difference between two sorted agglomerative-distance
/// vectors; a lower bound on the Gromov–Hausdorff distance between the
/// corresponding ultrametric spaces.
pub fn dendrogram_distance_max(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Sorted single-linkage merge heights of `x`.
pub fn agglomerative_distances(x: &PointSet) -> Result<Vec<f64>> {
    let dendro = single_linkage(&pairwise_distances(x)?)?;
    Ok(dendro.agglomerative_distances().to_vec())
}

/// Uniform sample of `m` rows without replacement, kept in original row order.
pub fn subsample(x: &PointSet, m: usize, seed: u64) -> Result<PointSet> {
    if m > x.len() {
        return Err(Error::InsufficientSamples(format!(
            "cannot draw {m} of {} points without replacement",
            x.len()
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut idx = rand::seq::index::sample(&mut rng, x.len(), m).into_vec();
    idx.sort_unstable();
    x.select(&idx)
}

/// Brings two sets to a common size according to `align`.
///
/// Returns the (possibly subsampled) pair and whether subsampling happened.
pub fn align_sizes<'a>(
    x_data: &'a PointSet,
    x_model: &'a PointSet,
    align: AlignStrategy,
) -> Result<(Cow<'a, PointSet>, Cow<'a, PointSet>, bool)> {
    if x_data.dim() != x_model.dim() {
        return Err(Error::DimensionMismatch {
            left_name: label_of(x_data, "real set"),
            left: x_data.dim(),
            right_name: label_of(x_model, "generated set"),
            right: x_model.dim(),
        });
    }
    let (nd, nm) = (x_data.len(), x_model.len());
    if nd == nm {
        return Ok((Cow::Borrowed(x_data), Cow::Borrowed(x_model), false));
    }
    match align {
        AlignStrategy::RequireEqual => Err(Error::Alignment { left: nd, right: nm }),
        AlignStrategy::SubsampleLarger { subsample_seed } => {
            if nd > nm {
                let s = subsample(x_data, nm, subsample_seed)?;
                Ok((Cow::Owned(s), Cow::Borrowed(x_model), true))
            } else {
                let s = subsample(x_model, nd, subsample_seed)?;
                Ok((Cow::Borrowed(x_data), Cow::Owned(s), true))
            }
        }
    }
}

fn label_of(x: &PointSet, fallback: &str) -> String {
    if x.name().is_empty() {
        fallback.to_owned()
    } else {
        x.name().to_owned()
    }
}

/// Dendrogram Distance between a reference set and a generated set.
///
/// Builds both single-linkage dendrograms and compares their sorted merge
/// heights. The headline value is the mean form; the max form is recorded
/// under `aux["dd_max"]`.
pub fn dd_from_pointsets(x_data: &PointSet, x_model: &PointSet, opts: DdOptions) -> Result<MetricReport> {
    let (data, model, subsampled) = align_sizes(x_data, x_model, opts.align)?;
    let da = agglomerative_distances(&data)?;
    let dm = agglomerative_distances(&model)?;
    let mean = dendrogram_distance(&da, &dm)?;
    let max = dendrogram_distance_max(&da, &dm)?;

    let mut report = MetricReport::new(MetricName::DdMean, mean)?
        .with_aux("dd_max", max)
        .with_aux("distance", DISTANCE_METRIC)
        .with_aux("linkage", "single")
        .with_aux("n_data", x_data.len())
        .with_aux("n_model", x_model.len())
        .with_aux("n_used", data.len())
        .with_aux("dim", x_data.dim())
        .with_aux("align", opts.align.as_str())
        .with_aux("subsampled", subsampled);
    if let AlignStrategy::SubsampleLarger { subsample_seed } = opts.align {
        report = report
            .with_aux("subsample_seed", subsample_seed)
            .with_aux("rng", rng::GENERATOR);
    }
    Ok(report)
}
