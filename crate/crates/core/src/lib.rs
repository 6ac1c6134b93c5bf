//! Dendrogram Distance (DD) for evaluating generative models.
//!
//! A reference set and a generated set each get a single-linkage dendrogram;
//! DD is the mean absolute gap between their sorted merge heights. Because a
//! dendrogram only sees distances *within* a set, DD ignores where modes sit
//! in space and reacts to how many there are and how they are spread, which
//! makes it a direct probe for mode collapse.
//!
//! The crate also carries the usual baselines, the Fréchet distance between
//! Gaussian fits (the core of FID) and the Inception Score, computed on
//! precomputed embeddings and class probabilities, plus the 2D Ring / Grid
//! benchmarks and a seeded sweep harness.
//!
//! | module | contents |
//! |---|---|
//! | [`types`] | `PointSet`, `Dendrogram`, `UltrametricMatrix`, `GaussianFit`, `MetricReport` |
//! | [`clustering`] | distance matrices, MST single linkage, naive oracle, ultrametric view |
//! | [`metrics`] | DD (mean / max), Fréchet distance, Inception Score |
//! | [`synthdata`] | ring and grid layouts, mode perturbation, mode dropping |
//! | [`ingest`] | CSV / binary point files, probability matrices, linkage tables, reports |
//! | [`harness`] | mode-drop, noise and checkpoint sweeps; summaries |
//! | [`cli`] | the `dendrodist` command line |
//!
//! ```
//! use dendrodist::{metrics, types::PointSet};
//!
//! let real = PointSet::from_rows(&[[0.0], [2.0], [6.0], [12.0]])?;
//! let fake = PointSet::from_rows(&[[0.0], [1.0], [2.0], [3.0]])?;
//! let report = metrics::dd_from_pointsets(&real, &fake, Default::default())?;
//! assert_eq!(report.value, 3.0);
//! # Ok::<(), dendrodist::Error>(())
//! ```

pub mod cli;
pub mod clustering;
pub mod error;
pub mod harness;
pub mod ingest;
pub mod metrics;
pub mod rng;
pub mod synthdata;
pub mod types;

pub use error::{Error, Result};
pub use types::{Dendrogram, GaussianFit, Merge, MetricName, MetricReport, PointSet, UltrametricMatrix};
