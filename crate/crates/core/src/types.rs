//! Domain types shared across the crate.
//!
//! Every type validates its invariants on construction, and `validate` can be
//! re-run on values that were deserialized or mutated through a builder.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n × d` matrix of samples, stored row-major, with optional mode labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    n: usize,
    d: usize,
    points: Vec<f64>,
    labels: Option<Vec<u32>>,
    name: String,
}

impl PointSet {
    /// Builds a point set from a row-major buffer of `n * d` coordinates.
    pub fn new(points: Vec<f64>, d: usize, labels: Option<Vec<u32>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("point set", "dimension d must be at least 1"));
        }
        if !points.len().is_multiple_of(d) {
            return Err(Error::invalid(
                "point set",
                format!("buffer of {} values is not a multiple of d={d}", points.len()),
            ));
        }
        let set = PointSet {
            n: points.len() / d,
            d,
            points,
            labels,
            name: String::new(),
        };
        set.validate()?;
        Ok(set)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut points = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::invalid(
                    "point set",
                    format!("row {i} has {} columns, expected {d}", row.len()),
                ));
            }
            points.extend_from_slice(row);
        }
        PointSet::new(points, d, None)
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        self.labels = Some(labels);
        self.validate()?;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(
                "point set",
                format!("need at least 2 points, got {}", self.n),
            ));
        }
        if self.d == 0 || self.points.len() != self.n * self.d {
            return Err(Error::invalid("point set", "buffer length does not equal n*d"));
        }
        if let Some(pos) = self.points.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "point set",
                format!(
                    "non-finite value {} at row {}, column {}",
                    self.points[pos],
                    pos / self.d,
                    pos % self.d
                ),
            ));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(Error::invalid(
                    "point set",
                    format!("{} labels for {} points", labels.len(), self.n),
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.points.chunks_exact(self.d)
    }

    /// Row-major coordinate buffer.
    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// Distinct labels in ascending order (empty when unlabeled).
    pub fn distinct_labels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.labels.iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Rows at `indices`, in that order, carrying their labels along.
    pub fn select(&self, indices: &[usize]) -> Result<PointSet> {
        let mut points = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            points.extend_from_slice(self.row(i));
        }
        let labels = self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect());
        Ok(PointSet::new(points, self.d, labels)?.with_name(self.name.clone()))
    }

    /// A copy with `offset` added to every row.
    pub fn translated(&self, offset: &[f64]) -> Result<PointSet> {
        if offset.len() != self.d {
            return Err(Error::DimensionMismatch {
                left_name: "point set".into(),
                left: self.d,
                right_name: "offset".into(),
                right: offset.len(),
            });
        }
        let points = self
            .rows()
            .flat_map(|row| row.iter().zip(offset).map(|(x, t)| x + t))
            .collect();
        Ok(PointSet::new(points, self.d, self.labels.clone())?.with_name(self.name.clone()))
    }
}

/// One agglomeration step: clusters `left` and `right` join at `height`,
/// producing a cluster of `size` leaves whose id is `n_leaves + step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// A stepwise dendrogram over `n_leaves` points.
///
/// Leaves carry ids `0..n`; the cluster created by merge `s` gets id `n + s`.
/// Heights never decrease along the merge sequence, so the partitions are
/// nested, and the last merge holds every leaf. The right-continuity of the
/// underlying scale-to-partition map is implicit in a finite merge list and is
/// not checked.
#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    n_leaves: usize,
    merges: Vec<Merge>,
    agglomerative_distances: Vec<f64>,
}

impl Dendrogram {
    pub fn new(n_leaves: usize, merges: Vec<Merge>) -> Result<Self> {
        validate_merges(n_leaves, &merges)?;
        let mut agglomerative_distances: Vec<f64> = merges.iter().map(|m| m.height).collect();
        agglomerative_distances.sort_by(f64::total_cmp);
        Ok(Dendrogram {
            n_leaves,
            merges,
            agglomerative_distances,
        })
    }

    pub fn validate(&self) -> Result<()> {
        validate_merges(self.n_leaves, &self.merges)?;
        let mut heights: Vec<f64> = self.merges.iter().map(|m| m.height).collect();
        heights.sort_by(f64::total_cmp);
        if heights != self.agglomerative_distances {
            return Err(Error::invalid(
                "dendrogram",
                "agglomerative distances do not match the sorted merge heights",
            ));
        }
        Ok(())
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Merge heights sorted ascending; `n_leaves - 1` entries.
    pub fn agglomerative_distances(&self) -> &[f64] {
        &self.agglomerative_distances
    }
}

fn validate_merges(n: usize, merges: &[Merge]) -> Result<()> {
    let bad = |reason: String| Err(Error::invalid("dendrogram", reason));
    if n < 2 {
        return bad(format!("need at least 2 leaves, got {n}"));
    }
    if merges.len() != n - 1 {
        return bad(format!("{} merges for {n} leaves, expected {}", merges.len(), n - 1));
    }
    let mut sizes = vec![1usize; n];
    sizes.resize(2 * n - 1, 0);
    let mut used = vec![false; 2 * n - 1];
    let mut prev = 0.0f64;
    for (step, m) in merges.iter().enumerate() {
        let available = n + step;
        for id in [m.left, m.right] {
            if id >= available {
                return bad(format!("merge {step} references cluster {id} before it exists"));
            }
            if used[id] {
                return bad(format!("merge {step} reuses cluster {id}"));
            }
        }
        if m.left == m.right {
            return bad(format!("merge {step} joins cluster {} with itself", m.left));
        }
        if !m.height.is_finite() || m.height < 0.0 {
            return bad(format!("merge {step} has invalid height {}", m.height));
        }
        if m.height < prev {
            return bad(format!(
                "merge {step} height {} is below the previous height {prev}",
                m.height
            ));
        }
        let size = sizes[m.left] + sizes[m.right];
        if m.size != size {
            return bad(format!("merge {step} records size {}, expected {size}", m.size));
        }
        used[m.left] = true;
        used[m.right] = true;
        sizes[available] = size;
        prev = m.height;
    }
    Ok(())
}

/// Dense symmetric `n × n` matrix of ultrametric distances.
#[derive(Clone, Debug, PartialEq)]
pub struct UltrametricMatrix {
    n: usize,
    u: Vec<f64>,
}

impl UltrametricMatrix {
    /// Validates symmetry, zero diagonal and the strong triangle inequality
    /// (exactly, over all triples).
    pub fn new(n: usize, u: Vec<f64>) -> Result<Self> {
        let m = UltrametricMatrix { n, u };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_trusted(n: usize, u: Vec<f64>) -> Self {
        debug_assert_eq!(u.len(), n * n);
        UltrametricMatrix { n, u }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.u.len() != n * n {
            return Err(Error::invalid("ultrametric", "buffer length does not equal n*n"));
        }
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(Error::invalid("ultrametric", format!("u({i},{i}) is not zero")));
            }
            for j in 0..n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::invalid("ultrametric", format!("u({i},{j}) = {v}")));
                }
                if v != self.get(j, i) {
                    return Err(Error::invalid("ultrametric", format!("u({i},{j}) != u({j},{i})")));
                }
            }
        }
        let worst = self.max_strong_triangle_violation();
        if worst > 0.0 {
            return Err(Error::invalid(
                "ultrametric",
                format!("strong triangle inequality violated by {worst:e}"),
            ));
        }
        Ok(())
    }

    /// Largest `u(i,k) - max(u(i,j), u(j,k))` over all triples, clamped at 0.
    pub fn max_strong_triangle_violation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let uij = self.get(i, j);
                for k in 0..n {
                    let excess = self.get(i, k) - uij.max(self.get(j, k));
                    worst = worst.max(excess);
                }
            }
        }
        worst
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.u[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }
}

/// Mean and unbiased covariance of a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianFit {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    sample_count: usize,
}

/// Absolute tolerance on covariance asymmetry.
pub const COVARIANCE_SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues may dip to `-PSD_RELATIVE_TOL * λ_max` before a matrix is
/// rejected as not positive semi-definite.
pub const PSD_RELATIVE_TOL: f64 = 1e-10;

impl GaussianFit {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>, sample_count: usize) -> Result<Self> {
        let fit = GaussianFit {
            mean,
            covariance,
            sample_count,
        };
        fit.validate()?;
        Ok(fit)
    }

    pub(crate) fn from_trusted(mean: DVector<f64>, covariance: DMatrix<f64>, n: usize) -> Self {
        GaussianFit {
            mean,
            covariance,
            sample_count: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.mean.len();
        if d == 0 {
            return Err(Error::invalid("gaussian fit", "empty mean vector"));
        }
        if self.covariance.shape() != (d, d) {
            return Err(Error::invalid(
                "gaussian fit",
                format!("covariance shape {:?} does not match d={d}", self.covariance.shape()),
            ));
        }
        if self.mean.iter().chain(self.covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("gaussian fit", "non-finite entry"));
        }
        for i in 0..d {
            for j in 0..i {
                let gap = (self.covariance[(i, j)] - self.covariance[(j, i)]).abs();
                if gap > COVARIANCE_SYMMETRY_TOL {
                    return Err(Error::invalid(
                        "gaussian fit",
                        format!("covariance asymmetric at ({i},{j}) by {gap:e}"),
                    ));
                }
            }
        }
        let eig = self.covariance.clone().symmetric_eigenvalues();
        let max = eig.iter().copied().fold(0.0f64, f64::max);
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = PSD_RELATIVE_TOL * max;
        if min < -tol {
            return Err(Error::NotPsd {
                eigenvalue: min,
                tolerance: tol,
            });
        }
        Ok(())
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    DdMean,
    DdMax,
    Fid,
    InceptionScore,
}

impl MetricName {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::DdMean => "dd_mean",
            MetricName::DdMax => "dd_max",
            MetricName::Fid => "fid",
            MetricName::InceptionScore => "inception_score",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dd_mean" => Some(MetricName::DdMean),
            "dd_max" => Some(MetricName::DdMax),
            "fid" => Some(MetricName::Fid),
            "inception_score" => Some(MetricName::InceptionScore),
            _ => None,
        }
    }

    /// Whether a smaller value means the two sets agree more closely.
    ///
    /// The two dendrogram distances and FID are divergences; the Inception
    /// Score rewards confident, diverse predictions and is higher-is-better.
    pub fn lower_is_better(self) -> bool {
        !matches!(self, MetricName::InceptionScore)
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single metric value plus provenance.
///
/// `aux` is a `BTreeMap` so serialized key order is stable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric_name: MetricName,
    pub value: f64,
    #[serde(default)]
    pub aux: BTreeMap<String, serde_json::Value>,
}

impl MetricReport {
    pub fn new(metric_name: MetricName, value: f64) -> Result<Self> {
        let r = MetricReport {
            metric_name,
            value,
            aux: BTreeMap::new(),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn with_aux(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.aux.insert(key.to_owned(), value.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.value;
        if !v.is_finite() {
            return Err(Error::invalid("metric report", format!("{} is not finite", v)));
        }
        let floor = match self.metric_name {
            MetricName::InceptionScore => 1.0,
            _ => 0.0,
        };
        if v < floor {
            return Err(Error::invalid(
                "metric report",
                format!("{} = {v} is below its minimum {floor}", self.metric_name),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_rejects_bad_shapes() {
        assert!(PointSet::from_rows(&[[1.0]]).is_err());
        assert!(PointSet::new(vec![0.0, 1.0, 2.0], 2, None).is_err());
        assert!(PointSet::new(vec![0.0, 1.0], 0, None).is_err());
        let err = PointSet::from_rows(&[[0.0, 1.0], [f64::NAN, 2.0]]).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
        let ok = PointSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(ok.clone().with_labels(vec![0]).is_err());
        assert_eq!(ok.with_labels(vec![3, 1]).unwrap().distinct_labels(), vec![1, 3]);
    }

    #[test]
    fn dendrogram_validation() {
        let m = |left, right, height, size| Merge {
            left,
            right,
            height,
            size,
        };
        let good = vec![m(0, 1, 2.0, 2), m(2, 4, 4.0, 3), m(3, 5, 6.0, 4)];
        let d = Dendrogram::new(4, good).unwrap();
        assert_eq!(d.agglomerative_distances(), &[2.0, 4.0, 6.0]);

        // decreasing height
        assert!(Dendrogram::new(3, vec![m(0, 1, 2.0, 2), m(2, 3, 1.0, 3)]).is_err());
        // reused cluster
        assert!(Dendrogram::new(3, vec![m(0, 1, 1.0, 2), m(0, 2, 2.0, 2)]).is_err());
        // forward reference
        assert!(Dendrogram::new(3, vec![m(0, 3, 1.0, 2), m(1, 2, 2.0, 2)]).is_err());
        // wrong size
        assert!(Dendrogram::new(3, vec![m(0, 1, 1.0, 2), m(2, 3, 2.0, 4)]).is_err());
        // wrong count
        assert!(Dendrogram::new(3, vec![m(0, 1, 1.0, 2)]).is_err());
        assert!(Dendrogram::new(2, vec![m(0, 1, -1.0, 2)]).is_err());
    }

    #[test]
    fn ultrametric_validation() {
        assert!(UltrametricMatrix::new(3, vec![0., 1., 2., 1., 0., 2., 2., 2., 0.]).is_ok());
        // 3-4-5 style metric violates the strong inequality
        let err = UltrametricMatrix::new(3, vec![0., 3., 5., 3., 0., 4., 5., 4., 0.]);
        assert!(err.is_err());
        assert!(UltrametricMatrix::new(2, vec![0., 1., 2., 0.]).is_err());
        assert!(UltrametricMatrix::new(2, vec![1., 1., 1., 0.]).is_err());
    }

    #[test]
    fn gaussian_fit_validation() {
        let mean = DVector::from_vec(vec![0.0, 0.0]);
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        assert!(GaussianFit::new(mean.clone(), cov, 10).is_ok());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(GaussianFit::new(mean.clone(), asym, 10).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            GaussianFit::new(mean, indefinite, 10),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn metric_report_floors() {
        assert!(MetricReport::new(MetricName::DdMean, -0.1).is_err());
        assert!(MetricReport::new(MetricName::Fid, f64::NAN).is_err());
        assert!(MetricReport::new(MetricName::InceptionScore, 0.9).is_err());
        assert!(MetricReport::new(MetricName::InceptionScore, 1.0).is_ok());
        let json = serde_json::to_string(&MetricReport::new(MetricName::DdMean, 0.5).unwrap()).unwrap();
        assert!(json.contains("\"metric_name\":\"dd_mean\""));
    }
}
