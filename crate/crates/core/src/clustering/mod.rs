//! Single-linkage dendrograms and their ultrametric view.

mod distance;
mod linkage;
mod ultrametric;
mod union_find;

pub use distance::{pairwise_distances, pairwise_distances_with_limit, DistanceMatrix, DEFAULT_MAX_POINTS};
pub use linkage::{naive_single_linkage, single_linkage};
pub use ultrametric::to_ultrametric;

/// Name of the ground metric used for every dendrogram; recorded in reports.
pub const DISTANCE_METRIC: &str = "euclidean";
