//! Seeded experiment sweeps producing long-format result tables.
//!
//! Cells are independent and run in parallel; every random draw in a cell
//! comes from a seed derived from the master seed and the cell's indices
//! (see [`seed`]), so the table is identical regardless of thread count or
//! scheduling. Any cell error aborts the sweep and no partial table is
//! returned.

pub mod seed;
mod sweeps;

use serde::{Deserialize, Serialize};

pub use sweeps::{checkpoint_series_eval, mode_drop_sweep, noise_sweep, FakeSize, ModeDropConfig, NoiseConfig};

use crate::error::{Error, Result};
use crate::types::MetricName;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub experiment_id: String,
    /// Number of modes present in the generated set; absent for checkpoint series.
    pub mode_count: Option<usize>,
    /// Mode-perturbation scale; absent outside noise sweeps.
    pub alpha: Option<f64>,
    /// Repetition index, or checkpoint index for checkpoint series.
    pub repetition: usize,
    pub seed: u64,
    pub metric_name: MetricName,
    pub value: f64,
}

impl SweepRow {
    fn cell_key(&self) -> (Option<usize>, Option<u64>, usize, MetricName) {
        (
            self.mode_count,
            self.alpha.map(f64::to_bits),
            self.repetition,
            self.metric_name,
        )
    }
}

/// Rows of a sweep plus the resolved configuration that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    rows: Vec<SweepRow>,
    config: serde_json::Value,
}

impl SweepResult {
    pub fn new(rows: Vec<SweepRow>, config: serde_json::Value) -> Result<Self> {
        let r = SweepResult { rows, config };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let mut keys: Vec<_> = self.rows.iter().map(SweepRow::cell_key).collect();
        keys.sort();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid("sweep result", format!("duplicate cell {:?}", w[0])));
        }
        if let Some(row) = self.rows.iter().find(|r| !r.value.is_finite()) {
            return Err(Error::invalid("sweep result", format!("non-finite value in {row:?}")));
        }
        Ok(())
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn config(&self) -> &serde_json::Value {
        &self.config
    }

    /// Values for one `(mode_count, alpha, metric)` cell across repetitions.
    pub fn values(&self, mode_count: Option<usize>, alpha: Option<f64>, metric: MetricName) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.mode_count == mode_count && r.alpha == alpha && r.metric_name == metric)
            .map(|r| r.value)
            .collect()
    }
}

/// Aggregate of one `(mode_count, alpha, metric)` group. `std` is the
/// population standard deviation (divides by the number of repetitions).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub mode_count: Option<usize>,
    pub alpha: Option<f64>,
    pub metric_name: MetricName,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryRow {
    /// `std / mean`, or 0 when both are zero.
    pub fn relative_std(&self) -> f64 {
        if self.std == 0.0 {
            0.0
        } else {
            self.std / self.mean.abs()
        }
    }
}

type GroupKey = (Option<usize>, Option<f64>, MetricName);

/// Groups rows by `(mode_count, alpha, metric_name)`; output is sorted by
/// metric, then alpha, then mode count.
pub fn summarize(result: &SweepResult) -> Result<Vec<SummaryRow>> {
    if result.rows.is_empty() {
        return Err(Error::invalid("summary", "the sweep result has no rows"));
    }
    let mut groups: Vec<(GroupKey, Vec<f64>)> = Vec::new();
    for row in &result.rows {
        let key = (row.mode_count, row.alpha, row.metric_name);
        let same = |k: &GroupKey| k.0 == key.0 && k.1.map(f64::to_bits) == key.1.map(f64::to_bits) && k.2 == key.2;
        match groups.iter_mut().find(|(k, _)| same(k)) {
            Some((_, values)) => values.push(row.value),
            None => groups.push((key, vec![row.value])),
        }
    }
    groups.sort_by(|(a, _), (b, _)| a.2.cmp(&b.2).then(cmp_opt_f64(a.1, b.1)).then(a.0.cmp(&b.0)));
    Ok(groups
        .into_iter()
        .map(|((mode_count, alpha, metric_name), values)| {
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count as f64;
            SummaryRow {
                mode_count,
                alpha,
                metric_name,
                count,
                mean,
                std: var.sqrt(),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect())
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> std::cmp::Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.is_some().cmp(&b.is_some()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(mode_count: usize, rep: usize, metric: MetricName, value: f64) -> SweepRow {
        SweepRow {
            experiment_id: "t".into(),
            mode_count: Some(mode_count),
            alpha: Some(0.0),
            repetition: rep,
            seed: 0,
            metric_name: metric,
            value,
        }
    }

    #[test]
    fn rejects_duplicates_and_non_finite() {
        let dup = vec![row(1, 0, MetricName::DdMean, 1.0), row(1, 0, MetricName::DdMean, 2.0)];
        assert!(SweepResult::new(dup, serde_json::Value::Null).is_err());
        let ok = vec![row(1, 0, MetricName::DdMean, 1.0), row(1, 0, MetricName::Fid, 2.0)];
        assert!(SweepResult::new(ok, serde_json::Value::Null).is_ok());
        let nan = vec![row(1, 0, MetricName::DdMean, f64::NAN)];
        assert!(SweepResult::new(nan, serde_json::Value::Null).is_err());
    }

    #[test]
    fn summary_statistics() {
        let r = SweepResult::new(
            vec![
                row(2, 0, MetricName::DdMean, 1.0),
                row(2, 1, MetricName::DdMean, 3.0),
                row(1, 0, MetricName::DdMean, 5.0),
                row(1, 1, MetricName::DdMean, 5.0),
                row(1, 0, MetricName::Fid, 7.0),
            ],
            serde_json::Value::Null,
        )
        .unwrap();
        let s = summarize(&r).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].mode_count, s[0].mean, s[0].std), (Some(1), 5.0, 0.0));
        assert_eq!((s[1].mode_count, s[1].mean, s[1].std), (Some(2), 2.0, 1.0));
        assert_eq!((s[1].min, s[1].max, s[1].count), (1.0, 3.0, 2));
        assert_eq!((s[2].metric_name, s[2].std), (MetricName::Fid, 0.0));
        assert_eq!(s[1].relative_std(), 0.5);
    }

    #[test]
    fn summary_of_empty_result_fails() {
        let r = SweepResult::new(vec![], serde_json::Value::Null).unwrap();
        assert!(summarize(&r).is_err());
    }
}
