//! Disjoint-set forest used to replay sorted MST edges as merges.

#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Dendrogram cluster id currently represented by each root.
    cluster: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
            cluster: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    pub(crate) fn cluster_of_root(&self, root: usize) -> usize {
        self.cluster[root]
    }

    pub(crate) fn size_of_root(&self, root: usize) -> usize {
        self.size[root]
    }

    /// Joins two distinct roots and labels the result `new_cluster`.
    pub(crate) fn union_roots(&mut self, a: usize, b: usize, new_cluster: usize) {
        debug_assert!(a != b);
        let (hi, lo) = if self.rank[a] < self.rank[b] { (b, a) } else { (a, b) };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] = self.rank[hi].saturating_add(1);
        }
        self.size[hi] += self.size[lo];
        self.cluster[hi] = new_cluster;
    }
}
