use crate::types::{Dendrogram, UltrametricMatrix};

/// Ultrametric induced by a dendrogram: `u(i, j)` is the height of the first
/// merge that places leaves `i` and `j` in the same cluster.
///
/// Each pair is written exactly once, when its two clusters join, so the
/// whole conversion is O(n²).
pub fn to_ultrametric(dendro: &Dendrogram) -> UltrametricMatrix {
    let n = dendro.n_leaves();
    let mut u = vec![0.0f64; n * n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    members.resize_with(2 * n - 1, Vec::new);

    for (step, m) in dendro.merges().iter().enumerate() {
        let left = std::mem::take(&mut members[m.left]);
        let right = std::mem::take(&mut members[m.right]);
        for &a in &left {
            for &b in &right {
                u[a * n + b] = m.height;
                u[b * n + a] = m.height;
            }
        }
        let mut joined = left;
        joined.extend(right);
        members[n + step] = joined;
    }
    UltrametricMatrix::from_trusted(n, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{pairwise_distances, single_linkage};
    use crate::types::{Merge, PointSet};
    use proptest::prelude::*;

    #[test]
    fn reads_heights_off_the_tree() {
        let x = PointSet::from_rows(&[[0.0], [2.0], [6.0], [12.0]]).unwrap();
        let dendro = single_linkage(&pairwise_distances(&x).unwrap()).unwrap();
        let u = to_ultrametric(&dendro);
        assert_eq!(u.get(0, 1), 2.0);
        assert_eq!(u.get(0, 2), 4.0);
        assert_eq!(u.get(0, 3), 6.0);
        assert_eq!(u.get(1, 2), 4.0);
        assert_eq!(u.get(1, 3), 6.0);
        assert_eq!(u.get(2, 3), 6.0);
        u.validate().unwrap();
    }

    #[test]
    fn two_leaves() {
        let d = Dendrogram::new(
            2,
            vec![Merge {
                left: 0,
                right: 1,
                height: 3.5,
                size: 2,
            }],
        )
        .unwrap();
        let u = to_ultrametric(&d);
        assert_eq!(u.as_slice(), &[0.0, 3.5, 3.5, 0.0]);
    }

    proptest! {
        #[test]
        fn strong_triangle_and_path_bound(coords in proptest::collection::vec(-10.0f64..10.0, 6..48)) {
            let coords = &coords[..coords.len() / 2 * 2];
            let x = PointSet::new(coords.to_vec(), 2, None).unwrap();
            let dist = pairwise_distances(&x).unwrap();
            let u = to_ultrametric(&single_linkage(&dist).unwrap());
            u.validate().unwrap();
            prop_assert_eq!(u.max_strong_triangle_violation(), 0.0);
            // single-linkage ultrametric is the subdominant one: never above the direct edge
            for i in 0..x.len() {
                for j in 0..x.len() {
                    prop_assert!(u.get(i, j) <= dist.get(i, j));
                }
            }
        }
    }
}
