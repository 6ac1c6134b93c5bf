//! From points to a single-linkage dendrogram, its agglomerative distance
//! vector, and the ultrametric it induces.
//!
//! ```text
//! cargo run --example dendrogram_ultrametric
//! ```

use dendrodist::clustering::{pairwise_distances, single_linkage, to_ultrametric};
use dendrodist::metrics::dendrogram_distance;
use dendrodist::PointSet;

fn main() -> dendrodist::Result<()> {
    let x = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [7.0, 7.0], [8.0, 7.0]])?;
    let dendro = single_linkage(&pairwise_distances(&x)?)?;
    for (s, m) in dendro.merges().iter().enumerate() {
        println!(
            "merge {s}: {} + {} -> {} at height {} (size {})",
            m.left,
            m.right,
            x.len() + s,
            m.height,
            m.size
        );
    }

    let u = to_ultrametric(&dendro);
    println!("ultrametric:");
    for i in 0..u.len() {
        let row: Vec<String> = (0..u.len()).map(|j| format!("{:6.3}", u.get(i, j))).collect();
        println!("  {}", row.join(" "));
    }
    println!("max strong-triangle violation: {:e}", u.max_strong_triangle_violation());

    let y = x.translated(&[0.0, 0.5])?;
    let moved = single_linkage(&pairwise_distances(&y)?)?;
    println!(
        "DD to a translated copy: {}",
        dendrogram_distance(dendro.agglomerative_distances(), moved.agglomerative_distances())?
    );
    Ok(())
}
