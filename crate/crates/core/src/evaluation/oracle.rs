//! Exhaustive search over set partitions, used as a ground-truth optimum
//! for small instances.

use crate::correlation::CorrelationMatrix;
use crate::error::{AlcError, Result};
use crate::likelihood::raw_cluster_likelihood;
use crate::partition::Partition;

pub const DEFAULT_MAX_N: usize = 8;

/// Likelihood ties closer than this are broken toward more clusters.
const TIE_TOLERANCE: f64 = 1e-12;

/// Calls `visit` with every set partition of `0..n` as a restricted growth
/// string (`labels[0] = 0`, each label at most one above the running max).
pub fn for_each_partition<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut labels = vec![0usize; n];
    let mut max = vec![0usize; n];
    loop {
        visit(&labels);
        // Rightmost position that can still be incremented.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= max[i - 1] {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        max[i] = max[i - 1].max(labels[i]);
        for k in (i + 1)..n {
            labels[k] = 0;
            max[k] = max[i];
        }
    }
}

/// Global likelihood maximizer over all partitions of `corr`'s objects.
///
/// Partitions containing a cluster with `c_s < n_s` are inadmissible. Among
/// partitions within `1e-12` of the best likelihood the one with the most
/// clusters is kept, matching the engine's refusal of zero-gain merges.
pub fn exhaustive_oracle(corr: &CorrelationMatrix, max_n: usize) -> Result<(Partition, f64)> {
    let n = corr.n();
    if n > max_n {
        return Err(AlcError::InvalidParameter(format!(
            "exhaustive search limited to {max_n} objects, got {n}"
        )));
    }
    let mut best_labels = (0..n).collect::<Vec<_>>();
    let mut best_value = 0.0;
    let mut best_k = n;
    let mut sizes = vec![0usize; n];
    let mut sums = vec![0.0f64; n];
    for_each_partition(n, |labels| {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        sizes[..k].fill(0);
        sums[..k].fill(0.0);
        for i in 0..n {
            let li = labels[i];
            sizes[li] += 1;
            let row = corr.row(i);
            for j in 0..n {
                if labels[j] == li {
                    sums[li] += row[j];
                }
            }
        }
        let mut value = 0.0;
        for s in 0..k {
            match raw_cluster_likelihood(sizes[s], sums[s]) {
                Some((v, _)) => value += v,
                None => return,
            }
        }
        if value > best_value + TIE_TOLERANCE
            || ((value - best_value).abs() <= TIE_TOLERANCE && k > best_k)
        {
            best_value = value;
            best_k = k;
            best_labels.copy_from_slice(labels);
        }
    });
    Ok((Partition::from_labels(&best_labels), best_value))
}
