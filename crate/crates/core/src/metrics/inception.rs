use crate::error::{Error, Result};
use crate::types::{MetricName, MetricReport};

/// Rows of a probability matrix must sum to 1 within this tolerance.
pub const ROW_SUM_TOL: f64 = 1e-6;

/// `n × c` matrix of per-sample class probabilities `p(y|x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    c: usize,
    data: Vec<f64>,
}

impl ProbabilityMatrix {
    pub fn new(data: Vec<f64>, classes: usize) -> Result<Self> {
        if classes == 0 || data.is_empty() || !data.len().is_multiple_of(classes) {
            return Err(Error::invalid(
                "probability matrix",
                format!("{} values do not form rows of {classes} classes", data.len()),
            ));
        }
        let m = ProbabilityMatrix {
            n: data.len() / classes,
            c: classes,
            data,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let c = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * c);
        for (i, r) in rows.iter().enumerate() {
            if r.as_ref().len() != c {
                return Err(Error::invalid(
                    "probability matrix",
                    format!("row {i} has {} entries, expected {c}", r.as_ref().len()),
                ));
            }
            data.extend_from_slice(r.as_ref());
        }
        ProbabilityMatrix::new(data, c)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows().enumerate() {
            if let Some(j) = row.iter().position(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::invalid(
                    "probability matrix",
                    format!("row {i}, class {j}: {} is not a probability", row[j]),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::invalid(
                    "probability matrix",
                    format!("row {i} sums to {sum}, expected 1 within {ROW_SUM_TOL:e}"),
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

    pub fn classes(&self) -> usize {
        self.c
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.c)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Inception Score over `splits` contiguous chunks.
///
/// Each chunk scores `exp(mean_x KL(p(y|x) ‖ p̂(y)))` with `p̂` the chunk's
/// row mean; returns the mean and population standard deviation across
/// chunks. Chunk sizes differ by at most one row.
pub fn inception_score(probs: &ProbabilityMatrix, splits: usize) -> Result<(f64, f64)> {
    let n = probs.len();
    if splits == 0 || splits > n {
        return Err(Error::invalid(
            "inception score",
            format!("splits must lie in 1..={n}, got {splits}"),
        ));
    }
    let c = probs.classes();
    let max_kl = (c as f64).ln();
    let rows: Vec<&[f64]> = probs.rows().collect();
    let scores: Vec<f64> = (0..splits)
        .map(|s| {
            let chunk = &rows[s * n / splits..(s + 1) * n / splits];
            let mut marginal = vec![0.0f64; c];
            for row in chunk {
                for (m, p) in marginal.iter_mut().zip(row.iter()) {
                    *m += p;
                }
            }
            for m in &mut marginal {
                *m /= chunk.len() as f64;
            }
            let kl_sum: f64 = chunk
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&marginal)
                        .filter(|(p, _)| **p > 0.0)
                        .map(|(p, q)| p * (p / q).ln())
                        .sum::<f64>()
                })
                .sum();
            // Jensen bounds the mean KL to [0, ln c]; clamp rounding excursions
            (kl_sum / chunk.len() as f64).clamp(0.0, max_kl).exp()
        })
        .collect();
    let mean = scores.iter().sum::<f64>() / splits as f64;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / splits as f64;
    Ok((mean, var.sqrt()))
}

pub fn inception_score_report(probs: &ProbabilityMatrix, splits: usize) -> Result<MetricReport> {
    let (mean, std) = inception_score(probs, splits)?;
    Ok(MetricReport::new(MetricName::InceptionScore, mean.max(1.0))?
        .with_aux("is_std", std)
        .with_aux("splits", splits)
        .with_aux("n", probs.len())
        .with_aux("classes", probs.classes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot(rows: &[usize], c: usize) -> ProbabilityMatrix {
        let data = rows
            .iter()
            .flat_map(|&k| (0..c).map(move |j| if j == k { 1.0 } else { 0.0 }))
            .collect();
        ProbabilityMatrix::new(data, c).unwrap()
    }

    #[test]
    fn uniform_rows_score_one() {
        let p = ProbabilityMatrix::new(vec![0.2; 5 * 7], 5).unwrap();
        let (m, s) = inception_score(&p, 1).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn balanced_one_hot_scores_class_count() {
        let p = one_hot(&(0..10).collect::<Vec<_>>(), 10);
        let (m, s) = inception_score(&p, 1).unwrap();
        assert!((m - 10.0).abs() < 1e-9, "{m}");
        assert_eq!(s, 0.0);
    }

    #[test]
    fn single_class_scores_one() {
        let p = one_hot(&[3; 8], 10);
        let (m, _) = inception_score(&p, 1).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn splits_are_contiguous() {
        // two chunks of 5: first chunk all class 0, second balanced over 5 classes
        let p = one_hot(&[0, 0, 0, 0, 0, 0, 1, 2, 3, 4], 5);
        let (m, s) = inception_score(&p, 2).unwrap();
        assert!((m - 3.0).abs() < 1e-12, "{m}");
        assert!((s - 2.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn rejects_bad_input() {
        let err = ProbabilityMatrix::from_rows(&[[0.5, 0.5], [0.5, 0.3]]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 1") && msg.contains("0.8"), "{msg}");
        assert!(ProbabilityMatrix::from_rows(&[[1.5, -0.5]]).is_err());
        let p = one_hot(&[0, 1], 2);
        assert!(inception_score(&p, 0).is_err());
        assert!(inception_score(&p, 3).is_err());
    }
}
