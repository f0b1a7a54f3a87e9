//! Minimum spanning tree under the distance `1 - rho`.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMatrix;
use crate::union_find::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// Kruskal over all pairs. Equal distances are resolved by `(i, j)` order,
/// which makes the tree unique.
pub fn mst_edges(corr: &CorrelationMatrix) -> Vec<MstEdge> {
    let n = corr.n();
    let mut edges: Vec<MstEdge> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        let row = corr.row(i);
        for j in (i + 1)..n {
            edges.push(MstEdge {
                i,
                j,
                distance: 1.0 - row[j],
            });
        }
    }
    edges.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });
    let mut ds = DisjointSet::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        if ds.union(e.i, e.j) {
            tree.push(e);
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    tree
}

pub fn total_weight(edges: &[MstEdge]) -> f64 {
    edges.iter().map(|e| e.distance).sum()
}
