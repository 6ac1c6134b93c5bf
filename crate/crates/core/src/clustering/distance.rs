use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::PointSet;

/// Largest point count for which a dense `n × n` matrix is built by default
/// (about 3.2 GB of 64-bit reals).
pub const DEFAULT_MAX_POINTS: usize = 20_000;

/// Dense symmetric matrix of pairwise distances with a zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major `n × n` buffer after checking it is a valid
    /// dissimilarity: finite, non-negative, exactly symmetric, zero diagonal.
    pub fn from_dense(n: usize, data: Vec<f64>) -> Result<Self> {
        let m = DistanceMatrix { n, data };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::invalid("distance matrix", format!("need n >= 2, got {n}")));
        }
        if self.data.len() != n * n {
            return Err(Error::invalid("distance matrix", "buffer length does not equal n*n"));
        }
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(Error::invalid(
                    "distance matrix",
                    format!("diagonal ({i},{i}) is not zero"),
                ));
            }
            for j in (i + 1)..n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::invalid("distance matrix", format!("entry ({i},{j}) = {v}")));
                }
                if v != self.get(j, i) {
                    return Err(Error::invalid(
                        "distance matrix",
                        format!("asymmetric at ({i},{j}): {v} vs {}", self.get(j, i)),
                    ));
                }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

pub fn pairwise_distances(x: &PointSet) -> Result<DistanceMatrix> {
    pairwise_distances_with_limit(x, DEFAULT_MAX_POINTS)
}

/// Euclidean distance matrix of the rows of `x`.
///
/// Rows are filled in parallel. Entry `(i, j)` is always evaluated with the
/// lower-indexed row first, so the result is exactly symmetric and does not
/// depend on the thread count.
pub fn pairwise_distances_with_limit(x: &PointSet, max_points: usize) -> Result<DistanceMatrix> {
    x.validate()?;
    let n = x.len();
    if n > max_points {
        return Err(Error::Capacity { n, limit: max_points });
    }
    let mut data = vec![0.0f64; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        for (j, slot) in out.iter_mut().enumerate() {
            if i != j {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                *slot = euclidean(x.row(a), x.row(b));
            }
        }
    });
    Ok(DistanceMatrix { n, data })
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_and_triangle() {
        let x = PointSet::from_rows(&[[0.0], [3.0]]).unwrap();
        let d = pairwise_distances(&x).unwrap();
        assert_eq!(d.as_slice(), &[0.0, 3.0, 3.0, 0.0]);

        let x = PointSet::from_rows(&[[0.0, 0.0], [3.0, 4.0]]).unwrap();
        let d = pairwise_distances(&x).unwrap();
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
    }

    #[test]
    fn exactly_symmetric() {
        let rows: Vec<[f64; 3]> = (0..17)
            .map(|i| {
                let t = i as f64;
                [t.sin() * 1.3, (t * 0.7).cos(), t.sqrt() / 3.0]
            })
            .collect();
        let d = pairwise_distances(&PointSet::from_rows(&rows).unwrap()).unwrap();
        for i in 0..17 {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..17 {
                assert_eq!(d.get(i, j).to_bits(), d.get(j, i).to_bits());
            }
        }
        d.validate().unwrap();
    }

    #[test]
    fn capacity_limit_names_n_and_limit() {
        let x = PointSet::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        let err = pairwise_distances_with_limit(&x, 2).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 3, limit: 2 }));
        let msg = err.to_string();
        assert!(msg.contains("n=3") && msg.contains('2'), "{msg}");
    }

    #[test]
    fn from_dense_rejects_invalid() {
        assert!(DistanceMatrix::from_dense(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_dense(2, vec![0.0, f64::INFINITY, f64::INFINITY, 0.0]).is_err());
        assert!(DistanceMatrix::from_dense(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_dense(1, vec![0.0]).is_err());
        assert!(DistanceMatrix::from_dense(2, vec![0.0, 7.0, 7.0, 0.0]).is_ok());
    }
}
