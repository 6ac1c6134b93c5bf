use std::cmp::Ordering;

use super::distance::DistanceMatrix;
use super::union_find::DisjointSet;
use crate::error::Result;
use crate::types::{Dendrogram, Merge};

#[derive(Clone, Copy, Debug)]
struct Edge {
    a: usize,
    b: usize,
    weight: f64,
}

/// Single-linkage dendrogram via a minimum spanning tree.
///
/// Prim's algorithm runs over the dense matrix in O(n²) time; the n−1 tree
/// edges are then sorted by `(weight, lower index, higher index)` and replayed
/// through a disjoint-set forest to produce merge records. Ties can change the
/// merge structure relative to other implementations, never the sorted heights.
pub fn single_linkage(dist: &DistanceMatrix) -> Result<Dendrogram> {
    dist.validate()?;
    let mut edges = prim_mst(dist);
    edges.sort_by(|x, y| x.weight.total_cmp(&y.weight).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    let n = dist.len();
    let mut forest = DisjointSet::new(n);
    let mut merges = Vec::with_capacity(n - 1);
    for (step, e) in edges.iter().enumerate() {
        let (ra, rb) = (forest.find(e.a), forest.find(e.b));
        let (ca, cb) = (forest.cluster_of_root(ra), forest.cluster_of_root(rb));
        let size = forest.size_of_root(ra) + forest.size_of_root(rb);
        forest.union_roots(ra, rb, n + step);
        merges.push(Merge {
            left: ca.min(cb),
            right: ca.max(cb),
            height: e.weight,
            size,
        });
    }
    Dendrogram::new(n, merges)
}

fn prim_mst(dist: &DistanceMatrix) -> Vec<Edge> {
    let n = dist.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);

    in_tree[0] = true;
    for (j, &w) in dist.row(0).iter().enumerate().skip(1) {
        best[j] = w;
    }
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_w = f64::INFINITY;
        for j in 0..n {
            if !in_tree[j] && (next == usize::MAX || best[j] < next_w) {
                next = j;
                next_w = best[j];
            }
        }
        in_tree[next] = true;
        let p = parent[next];
        edges.push(Edge {
            a: p.min(next),
            b: p.max(next),
            weight: next_w,
        });
        for (k, &w) in dist.row(next).iter().enumerate() {
            if !in_tree[k] && w < best[k] {
                best[k] = w;
                parent[k] = next;
            }
        }
    }
    edges
}

/// Textbook O(n³) agglomeration: repeatedly merge the two active clusters at
/// minimum single-linkage distance. Kept as an independent cross-check of
/// [`single_linkage`]; practical only for small inputs (n ≲ 256).
pub fn naive_single_linkage(dist: &DistanceMatrix) -> Result<Dendrogram> {
    dist.validate()?;
    let n = dist.len();
    // Cluster-to-cluster distances, indexed by slot. Slot i starts as leaf i;
    // a merge keeps the lower slot and retires the higher one.
    let mut link: Vec<f64> = dist.as_slice().to_vec();
    let mut active = vec![true; n];
    let mut cluster_id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut pick: Option<(usize, usize, f64)> = None;
        for a in 0..n {
            if !active[a] {
                continue;
            }
            for b in (a + 1)..n {
                if !active[b] {
                    continue;
                }
                let w = link[a * n + b];
                let better = match pick {
                    None => true,
                    Some((_, _, cur)) => w.total_cmp(&cur) == Ordering::Less,
                };
                if better {
                    pick = Some((a, b, w));
                }
            }
        }
        let (a, b, w) = pick.expect("at least two active clusters remain");
        let (ca, cb) = (cluster_id[a], cluster_id[b]);
        merges.push(Merge {
            left: ca.min(cb),
            right: ca.max(cb),
            height: w,
            size: size[a] + size[b],
        });
        for k in 0..n {
            if active[k] && k != a && k != b {
                let merged = link[a * n + k].min(link[b * n + k]);
                link[a * n + k] = merged;
                link[k * n + a] = merged;
            }
        }
        active[b] = false;
        size[a] += size[b];
        cluster_id[a] = n + step;
    }
    Dendrogram::new(n, merges)
}
