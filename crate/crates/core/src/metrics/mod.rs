//! Divergences between a reference set and a generated set.
//!
//! All three dendrogram and Fréchet quantities are lower-is-better; the
//! Inception Score is higher-is-better (see [`MetricName::lower_is_better`]).
//!
//! [`MetricName::lower_is_better`]: crate::types::MetricName::lower_is_better

mod dendrogram;
mod frechet;
mod inception;

pub use dendrogram::{
    agglomerative_distances, align_sizes, dd_from_pointsets, dendrogram_distance, dendrogram_distance_max, subsample,
    AlignStrategy, DdOptions,
};
pub use frechet::{fid_from_pointsets, fit_gaussian, frechet_distance, matrix_sqrt_psd, FRECHET_NEGATIVE_TOL};
pub use inception::{inception_score, inception_score_report, ProbabilityMatrix, ROW_SUM_TOL};
