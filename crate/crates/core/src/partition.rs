//! Cluster assignments over a fixed object set.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{AlcError, Result};

/// Assignment of every object `0..n` to exactly one cluster.
///
/// Labels are always canonical: relabelled by first occurrence so they are
/// contiguous from zero. Two partitions compare equal iff they group the
/// objects identically, whatever labels they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary (possibly sparse) labels.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(raw: &[L]) -> Self {
        let mut remap: HashMap<L, usize> = HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    /// Builds a partition from member lists. Every index in `0..n` must
    /// appear exactly once.
    pub fn from_clusters(clusters: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            for &i in members {
                if i >= n {
                    return Err(AlcError::InvalidInput(format!(
                        "object index {i} outside [0, {n})"
                    )));
                }
                if raw[i] != usize::MAX {
                    return Err(AlcError::InvalidInput(format!(
                        "object {i} assigned to more than one cluster"
                    )));
                }
                raw[i] = c;
            }
        }
        if let Some(i) = raw.iter().position(|&l| l == usize::MAX) {
            return Err(AlcError::InvalidInput(format!(
                "object {i} is not assigned to any cluster"
            )));
        }
        Ok(Self::from_labels(&raw))
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn single_cluster(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_clusters(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Member lists indexed by canonical label, members ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_clusters()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// True when every cluster of `self` lies inside a cluster of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut host = vec![usize::MAX; self.num_clusters()];
        for (i, &l) in self.labels.iter().enumerate() {
            let c = coarser.labels[i];
            if host[l] == usize::MAX {
                host[l] = c;
            } else if host[l] != c {
                return false;
            }
        }
        true
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.labels
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = std::convert::Infallible;

    fn try_from(v: Vec<usize>) -> std::result::Result<Self, Self::Error> {
        Ok(Partition::from_labels(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_by_first_occurrence() {
        let p = Partition::from_labels(&[7, 3, 7, 9, 3]);
        assert_eq!(p.labels(), &[0, 1, 0, 2, 1]);
        assert_eq!(p.num_clusters(), 3);
        assert_eq!(p.clusters(), vec![vec![0, 2], vec![1, 4], vec![3]]);
    }

    #[test]
    fn relabelled_partitions_are_equal() {
        assert_eq!(
            Partition::from_labels(&[1, 1, 0, 0]),
            Partition::from_labels(&[5, 5, 2, 2])
        );
    }

    #[test]
    fn from_clusters_rejects_bad_cover() {
        assert!(Partition::from_clusters(&[vec![0, 1], vec![1]], 2).is_err());
        assert!(Partition::from_clusters(&[vec![0]], 2).is_err());
        assert!(Partition::from_clusters(&[vec![0, 5]], 2).is_err());
        let p = Partition::from_clusters(&[vec![2], vec![0, 1]], 3).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_labels(&[0, 1, 2, 2]);
        let coarse = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(Partition::singletons(4).refines(&coarse));
    }
}
