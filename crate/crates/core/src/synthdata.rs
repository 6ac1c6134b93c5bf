//! Synthetic 2D Gaussian-mixture benchmarks and mode-collapse simulation.
//!
//! The 2D Ring places `k` isotropic modes evenly on a circle centred at the
//! origin (first mode at angle zero); the 2D Grid places `m²` modes on an
//! `m × m` lattice spanning `[0, L]²`. In both cases the characteristic length
//! `L` (ring diameter or grid side) scales the mode perturbation, and the
//! default mode standard deviation is `0.01 · L`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::types::PointSet;

pub const DEFAULT_RING_MODES: usize = 7;
pub const DEFAULT_RING_RADIUS: f64 = 50.0;
pub const DEFAULT_GRID_MODES: usize = 9;
pub const DEFAULT_GRID_LENGTH: f64 = 100.0;
/// Default mode standard deviation as a fraction of the characteristic length.
pub const DEFAULT_SIGMA_FRACTION: f64 = 0.01;
pub const DEFAULT_N_PER_MODE: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    Ring,
    Grid,
    Custom,
}

impl LayoutKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LayoutKind::Ring => "ring",
            LayoutKind::Grid => "grid",
            LayoutKind::Custom => "custom",
        }
    }
}

/// Mode centres of an isotropic 2D Gaussian mixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeLayout {
    pub kind: LayoutKind,
    pub means: Vec<[f64; 2]>,
    /// Per-mode standard deviation, in coordinate units.
    pub sigma: f64,
    pub characteristic_length: f64,
}

impl ModeLayout {
    pub fn new(kind: LayoutKind, means: Vec<[f64; 2]>, sigma: f64, characteristic_length: f64) -> Result<Self> {
        let layout = ModeLayout {
            kind,
            means,
            sigma,
            characteristic_length,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.means.is_empty() {
            return Err(Error::Layout("a layout needs at least one mode".into()));
        }
        if self.means.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Layout("mode means must be finite".into()));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Layout(format!("sigma must be positive, got {}", self.sigma)));
        }
        let l = self.characteristic_length;
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Layout(format!(
                "characteristic length must be positive, got {l}"
            )));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.means.len()
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }
}

/// `modes` means evenly spaced on a circle of `radius`; `L` is the diameter.
pub fn ring_layout(modes: usize, radius: f64) -> Result<ModeLayout> {
    if modes == 0 {
        return Err(Error::Layout("ring needs at least one mode".into()));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Layout(format!("ring radius must be positive, got {radius}")));
    }
    let means = (0..modes)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / modes as f64;
            [radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    let length = 2.0 * radius;
    ModeLayout::new(LayoutKind::Ring, means, DEFAULT_SIGMA_FRACTION * length, length)
}

/// `modes = m²` means on an `m × m` lattice spanning `[0, length]²`.
///
/// Mode `r·m + c` sits at column `c`, row `r`. A single mode sits at the
/// centre of the square.
pub fn grid_layout(modes: usize, length: f64) -> Result<ModeLayout> {
    let side = (modes as f64).sqrt().round() as usize;
    if modes == 0 || side * side != modes {
        return Err(Error::Layout(format!(
            "grid mode count must be a perfect square, got {modes}"
        )));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Layout(format!("grid length must be positive, got {length}")));
    }
    let means = if side == 1 {
        vec![[length / 2.0, length / 2.0]]
    } else {
        let step = length / (side - 1) as f64;
        (0..side)
            .flat_map(|r| (0..side).map(move |c| [c as f64 * step, r as f64 * step]))
            .collect()
    };
    ModeLayout::new(LayoutKind::Grid, means, DEFAULT_SIGMA_FRACTION * length, length)
}

/// Displaces every mode mean by an independent draw from
/// `Unif(−α·L, α·L)` per coordinate. `alpha = 0` returns the layout unchanged.
pub fn perturb_modes(layout: &ModeLayout, alpha: f64, seed: u64) -> Result<ModeLayout> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Layout(format!("alpha must be non-negative, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(layout.clone());
    }
    let half_width = alpha * layout.characteristic_length;
    let mut rng = rng::seeded(seed);
    let mut out = layout.clone();
    for m in &mut out.means {
        for v in m.iter_mut() {
            *v += rng.random_range(-half_width..=half_width);
        }
    }
    Ok(out)
}

/// `n_per_mode` draws from every mode, mode-major, labelled by mode index.
pub fn sample_dataset(layout: &ModeLayout, n_per_mode: usize, seed: u64) -> Result<PointSet> {
    if n_per_mode == 0 {
        return Err(Error::InsufficientSamples("n_per_mode must be at least 1".into()));
    }
    sample_modes(layout, &vec![n_per_mode; layout.modes()], seed)
}

/// Draws `counts[i]` points from mode `i` (zero skips the mode).
pub fn sample_modes(layout: &ModeLayout, counts: &[usize], seed: u64) -> Result<PointSet> {
    layout.validate()?;
    if counts.len() != layout.modes() {
        return Err(Error::Layout(format!(
            "{} counts for a layout of {} modes",
            counts.len(),
            layout.modes()
        )));
    }
    let total: usize = counts.iter().sum();
    let mut rng = rng::seeded(seed);
    let mut points = Vec::with_capacity(2 * total);
    let mut labels = Vec::with_capacity(total);
    for (mode, (&count, mean)) in counts.iter().zip(&layout.means).enumerate() {
        for _ in 0..count {
            let zx: f64 = rng.sample(StandardNormal);
            let zy: f64 = rng.sample(StandardNormal);
            points.push(mean[0] + layout.sigma * zx);
            points.push(mean[1] + layout.sigma * zy);
            labels.push(mode as u32);
        }
    }
    Ok(PointSet::new(points, 2, Some(labels))?.with_name(layout.kind.as_str()))
}

/// Splits `total` points over the first `kept` modes as evenly as possible;
/// earlier modes take the remainder.
pub fn split_total(total: usize, kept: usize, modes: usize) -> Vec<usize> {
    (0..modes)
        .map(|i| {
            if i < kept {
                total / kept + usize::from(i < total % kept)
            } else {
                0
            }
        })
        .collect()
}

/// Uniform sample without replacement of `n_total` rows whose label is in
/// `kept_labels`, simulating a generator that only covers those modes.
pub fn drop_modes(x: &PointSet, kept_labels: &[u32], n_total: usize, seed: u64) -> Result<PointSet> {
    let labels = x
        .labels()
        .ok_or_else(|| Error::invalid("mode drop", "the input point set has no labels"))?;
    if kept_labels.is_empty() {
        return Err(Error::invalid("mode drop", "at least one label must be kept"));
    }
    let present = x.distinct_labels();
    if let Some(&missing) = kept_labels.iter().find(|l| present.binary_search(l).is_err()) {
        return Err(Error::UnknownLabel(missing));
    }
    let candidates: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| kept_labels.contains(l))
        .map(|(i, _)| i)
        .collect();
    if candidates.len() < n_total {
        return Err(Error::InsufficientSamples(format!(
            "{} points carry the kept labels {kept_labels:?}, cannot draw {n_total}",
            candidates.len()
        )));
    }
    let mut rng = rng::seeded(seed);
    let picks: Vec<usize> = rand::seq::index::sample(&mut rng, candidates.len(), n_total)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    x.select(&picks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_defaults() {
        let l = ring_layout(DEFAULT_RING_MODES, DEFAULT_RING_RADIUS).unwrap();
        assert_eq!(l.modes(), 7);
        assert_eq!(l.characteristic_length, 100.0);
        assert_eq!(l.sigma, 1.0);
        assert_eq!(l.means[0], [50.0, 0.0]);
    }

    #[test]
    fn ring_four_on_unit_circle() {
        let l = ring_layout(4, 1.0).unwrap();
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (m, e) in l.means.iter().zip(expect) {
            assert!((m[0] - e[0]).abs() < 1e-15 && (m[1] - e[1]).abs() < 1e-15, "{m:?}");
        }
        assert_eq!(ring_layout(1, 3.0).unwrap().means, vec![[3.0, 0.0]]);
        assert!(ring_layout(0, 1.0).is_err());
        assert!(ring_layout(3, 0.0).is_err());
    }

    #[test]
    fn grid_lattices() {
        let l = grid_layout(DEFAULT_GRID_MODES, DEFAULT_GRID_LENGTH).unwrap();
        let mut got = l.means.clone();
        got.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut want = vec![];
        for x in [0.0, 50.0, 100.0] {
            for y in [0.0, 50.0, 100.0] {
                want.push([x, y]);
            }
        }
        assert_eq!(got, want);
        assert_eq!(l.characteristic_length, 100.0);

        let l = grid_layout(4, 2.0).unwrap();
        assert_eq!(l.means, vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]]);
        assert_eq!(grid_layout(1, 10.0).unwrap().means, vec![[5.0, 5.0]]);
        let err = grid_layout(8, 100.0).unwrap_err();
        assert!(err.to_string().contains("perfect square"));
    }

    #[test]
    fn perturbation_bounds_and_identity() {
        let base = grid_layout(9, 100.0).unwrap();
        assert_eq!(perturb_modes(&base, 0.0, 1).unwrap(), base);
        assert!(perturb_modes(&base, -0.1, 1).is_err());

        let ring = ring_layout(7, 50.0).unwrap();
        let mut max_shift = 0.0f64;
        for seed in 0..1500 {
            let p = perturb_modes(&ring, 0.2, seed).unwrap();
            assert_eq!(p.sigma, ring.sigma);
            assert_eq!(p.characteristic_length, ring.characteristic_length);
            for (a, b) in p.means.iter().zip(&ring.means) {
                for k in 0..2 {
                    let shift = (a[k] - b[k]).abs();
                    assert!(shift <= 20.0 + 1e-12, "shift {shift}");
                    max_shift = max_shift.max(shift);
                }
            }
        }
        // 10^4+ draws should come close to the bound
        assert!(max_shift > 19.9);
        assert_eq!(
            perturb_modes(&ring, 0.2, 3).unwrap(),
            perturb_modes(&ring, 0.2, 3).unwrap()
        );
    }

    #[test]
    fn sampling_counts_and_determinism() {
        let l = ring_layout(7, 50.0).unwrap();
        let x = sample_dataset(&l, 100, 42).unwrap();
        assert_eq!(x.len(), 700);
        for mode in 0..7u32 {
            assert_eq!(x.labels().unwrap().iter().filter(|&&v| v == mode).count(), 100);
        }
        let y = sample_dataset(&l, 100, 42).unwrap();
        assert_eq!(
            x.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            y.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(x, sample_dataset(&l, 100, 43).unwrap());
    }

    #[test]
    fn per_mode_means_within_standard_error() {
        let l = ring_layout(7, 50.0).unwrap();
        let n = 400;
        let x = sample_dataset(&l, n, 7).unwrap();
        let bound = 3.0 * l.sigma / (n as f64).sqrt();
        for (mode, mean) in l.means.iter().enumerate() {
            let rows: Vec<&[f64]> = x
                .rows()
                .zip(x.labels().unwrap())
                .filter(|(_, &lab)| lab as usize == mode)
                .map(|(r, _)| r)
                .collect();
            for k in 0..2 {
                let emp = rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64;
                assert!((emp - mean[k]).abs() < bound, "mode {mode} axis {k}");
            }
        }
    }

    #[test]
    fn split_total_is_balanced() {
        assert_eq!(split_total(700, 3, 7), vec![234, 233, 233, 0, 0, 0, 0]);
        assert_eq!(split_total(700, 7, 7), vec![100; 7]);
        assert_eq!(split_total(5, 1, 2), vec![5, 0]);
    }

    #[test]
    fn dropping_modes() {
        let l = ring_layout(4, 10.0).unwrap();
        let x = sample_dataset(&l, 20, 1).unwrap();

        let all = drop_modes(&x, &[0, 1, 2, 3], x.len(), 5).unwrap();
        let key = |p: &PointSet| {
            let mut rows: Vec<Vec<u64>> = p.rows().map(|r| r.iter().map(|v| v.to_bits()).collect()).collect();
            rows.sort();
            rows
        };
        assert_eq!(key(&all), key(&x));

        let only0 = drop_modes(&x, &[0], 15, 5).unwrap();
        assert!(only0.labels().unwrap().iter().all(|&l| l == 0));
        assert_eq!(only0.len(), 15);

        assert!(matches!(drop_modes(&x, &[9], 5, 5), Err(Error::UnknownLabel(9))));
        assert!(matches!(
            drop_modes(&x, &[0], 21, 5),
            Err(Error::InsufficientSamples(_))
        ));
        assert!(drop_modes(&x, &[], 5, 5).is_err());
        let unlabeled = PointSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(drop_modes(&unlabeled, &[0], 2, 0).is_err());
    }
}
