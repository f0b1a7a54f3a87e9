//! Scoring and experiment harness.

pub mod ari;
pub mod bench;
pub mod mst;
pub mod noise;
pub mod oracle;

pub use ari::{adjusted_rand_index, AriReport, PairCounts};
pub use bench::{benchmark_scaling, fit_exponent, ScalingConfig, ScalingReport};
pub use mst::{mst_edges, MstEdge};
pub use noise::{noise_statistics, run_noise_suite, spearman, NoiseStatistics};
pub use oracle::{exhaustive_oracle, for_each_partition};

use crate::error::Result;
use crate::io::read_labels;
use crate::partition::Partition;

/// ARI between `ours` and a label file written by another tool.
///
/// The file must list every object `0..N` exactly once; labels are compared
/// as strings, so a noise label such as `-1` forms one group.
pub fn compare_labelfile<R: std::io::Read>(ours: &Partition, file: R) -> Result<AriReport> {
    let theirs = read_labels(file, Some(ours.len()))?;
    adjusted_rand_index(ours, &theirs)
}
