//! The cluster log-likelihood of the Potts correlation model and its merge deltas.
//!
//! For a cluster `s` with `n_s` members and intra-cluster correlation sum
//! `c_s` (diagonal included) the likelihood contribution is
//!
//! ```text
//! L_s = 1/2 [ ln(n_s / c_s) + (n_s - 1) ln((n_s^2 - n_s) / (n_s^2 - c_s)) ]
//! ```
//!
//! and the configuration likelihood is the sum over clusters with `n_s > 1`.
//! Singletons contribute exactly zero. Values of `c_s` at or above `n_s^2`
//! (perfectly correlated members) are clamped just below the pole so that
//! duplicates still compare as the best possible merge.

use crate::correlation::CorrelationMatrix;
use crate::error::{AlcError, Result};
use crate::partition::Partition;

/// Relative distance from the `c_s = n_s^2` pole used when clamping.
pub const CLAMP_DELTA: f64 = 1e-12;

/// Merge deltas must exceed this to count as an improvement.
pub const EPSILON_MERGE: f64 = 1e-12;

/// Size and correlation sum of one cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterStats {
    pub n: usize,
    pub c: f64,
}

impl ClusterStats {
    pub fn new(n: usize, c: f64) -> Self {
        ClusterStats { n, c }
    }

    pub fn singleton() -> Self {
        ClusterStats { n: 1, c: 1.0 }
    }
}

/// A likelihood (or likelihood difference) together with a flag recording
/// whether any contributing cluster hit the upper-bound clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Likelihood {
    pub value: f64,
    pub clamped: bool,
}

impl Likelihood {
    pub const ZERO: Likelihood = Likelihood {
        value: 0.0,
        clamped: false,
    };
}

/// Intra-cluster coupling `g_s = sqrt((c_s - n_s) / (n_s^2 - n_s))`.
pub fn cluster_coupling(stats: ClusterStats) -> Result<f64> {
    let ClusterStats { n, c } = stats;
    if n < 2 {
        return Err(AlcError::UndefinedCoupling { n });
    }
    let nf = n as f64;
    if c < nf {
        return Err(AlcError::ConstraintViolation { n, c });
    }
    let max = nf * nf;
    let c = c.min(max);
    Ok(((c - nf) / (max - nf)).sqrt())
}

/// Likelihood of one cluster. `None` when `c < n` for `n >= 2`.
#[inline]
pub(crate) fn raw_cluster_likelihood(n: usize, c: f64) -> Option<(f64, bool)> {
    if n < 2 {
        return Some((0.0, false));
    }
    let nf = n as f64;
    // NaN fails this comparison too.
    if !(c >= nf) {
        return None;
    }
    let n2 = nf * nf;
    let limit = n2 * (1.0 - CLAMP_DELTA);
    let (c, clamped) = if c >= limit {
        (limit, true)
    } else {
        (c, false)
    };
    let value = 0.5 * ((nf / c).ln() + (nf - 1.0) * ((n2 - nf) / (n2 - c)).ln());
    Some((value, clamped))
}

pub fn cluster_likelihood(stats: ClusterStats) -> Result<Likelihood> {
    raw_cluster_likelihood(stats.n, stats.c)
        .map(|(value, clamped)| Likelihood { value, clamped })
        .ok_or(AlcError::ConstraintViolation {
            n: stats.n,
            c: stats.c,
        })
}

/// Total likelihood of `partition`, recomputing every `c_s` from `corr`.
pub fn total_likelihood(partition: &Partition, corr: &CorrelationMatrix) -> Result<Likelihood> {
    if partition.len() != corr.n() {
        return Err(AlcError::InvalidInput(format!(
            "partition covers {} objects but the correlation matrix has {}",
            partition.len(),
            corr.n()
        )));
    }
    total_likelihood_of_clusters(&partition.clusters(), corr)
}

/// Same as [`total_likelihood`] for explicit member lists. Indices must lie
/// in `[0, n)`; coverage is not checked.
pub fn total_likelihood_of_clusters(
    clusters: &[Vec<usize>],
    corr: &CorrelationMatrix,
) -> Result<Likelihood> {
    let mut total = Likelihood::ZERO;
    for members in clusters {
        if let Some(&bad) = members.iter().find(|&&i| i >= corr.n()) {
            return Err(AlcError::InvalidInput(format!(
                "object index {bad} outside [0, {})",
                corr.n()
            )));
        }
        if members.len() < 2 {
            continue;
        }
        let l = cluster_likelihood(ClusterStats::new(members.len(), corr.block_sum(members)))?;
        total.value += l.value;
        total.clamped |= l.clamped;
    }
    Ok(total)
}

/// Stats of the union of two disjoint clusters. `cross_sum` counts each
/// unordered pair once; the doubling happens here.
pub fn merge_stats(a: ClusterStats, b: ClusterStats, cross_sum: f64) -> ClusterStats {
    ClusterStats {
        n: a.n + b.n,
        c: a.c + b.c + 2.0 * cross_sum,
    }
}

/// Merge gain relative to the sum of the parts.
pub fn delta_merge_case2(a: ClusterStats, b: ClusterStats, cross_sum: f64) -> Result<Likelihood> {
    let merged = cluster_likelihood(merge_stats(a, b, cross_sum))?;
    let la = cluster_likelihood(a)?;
    let lb = cluster_likelihood(b)?;
    Ok(Likelihood {
        value: merged.value - la.value - lb.value,
        clamped: merged.clamped || la.clamped || lb.clamped,
    })
}

/// Merge gain relative to the better of the parts.
pub fn delta_merge_case1(a: ClusterStats, b: ClusterStats, cross_sum: f64) -> Result<Likelihood> {
    let merged = cluster_likelihood(merge_stats(a, b, cross_sum))?;
    let la = cluster_likelihood(a)?;
    let lb = cluster_likelihood(b)?;
    Ok(Likelihood {
        value: merged.value - la.value.max(lb.value),
        clamped: merged.clamped || la.clamped || lb.clamped,
    })
}
