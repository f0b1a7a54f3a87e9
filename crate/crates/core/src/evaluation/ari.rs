//! Adjusted Rand Index under the permutation model.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{AlcError, Result};
use crate::partition::Partition;

/// Pair classification counts for two partitions of the same objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    /// Together in both.
    pub together_together: u64,
    /// Together in the first, apart in the second.
    pub together_apart: u64,
    pub apart_together: u64,
    pub apart_apart: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AriReport {
    pub ari: f64,
    pub objects: usize,
    pub pairs: PairCounts,
}

fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// ARI between `a` and `b`.
///
/// When the chance-corrected denominator vanishes (both partitions are all
/// singletons, or both are a single cluster) the index is 1 for identical
/// partitions and 0 otherwise.
pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<AriReport> {
    if a.len() != b.len() {
        return Err(AlcError::InvalidInput(format!(
            "partitions cover different object sets ({} vs {} objects)",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    for (&la, &lb) in a.labels().iter().zip(b.labels()) {
        *table.entry((la, lb)).or_default() += 1;
    }
    let index: u64 = table.values().map(|&c| pairs(c)).sum();
    let sum_a: u64 = a.cluster_sizes().iter().map(|&c| pairs(c as u64)).sum();
    let sum_b: u64 = b.cluster_sizes().iter().map(|&c| pairs(c as u64)).sum();
    let total = pairs(n);

    let counts = PairCounts {
        together_together: index,
        together_apart: sum_a - index,
        apart_together: sum_b - index,
        apart_apart: total + index - sum_a - sum_b,
    };

    // Denominator (sa + sb)/2 - sa*sb/total, compared exactly in integers.
    let (sa, sb, t) = (sum_a as u128, sum_b as u128, total as u128);
    let ari = if t == 0 || (sa + sb) * t == 2 * sa * sb {
        if a == b {
            1.0
        } else {
            0.0
        }
    } else {
        let (index, sa, sb, t) = (index as f64, sa as f64, sb as f64, t as f64);
        let expected = sa * sb / t;
        let max = 0.5 * (sa + sb);
        (index - expected) / (max - expected)
    };
    Ok(AriReport {
        ari,
        objects: a.len(),
        pairs: counts,
    })
}
