//! Cluster statistics on structureless (white-noise) data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::estimate_correlation;
use crate::engine::{run, EngineConfig};
use crate::error::Result;
use crate::partition::Partition;
use crate::synthetic::{derive_seed, gen_white_noise};

/// Spearman correlation at or below this counts as a decreasing trend.
pub const TREND_THRESHOLD: f64 = -0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub n: usize,
    pub runs: usize,
    pub mean_clusters: f64,
    /// Mean of `K / N`.
    pub mean_normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseStatistics {
    pub rows: Vec<NoiseRow>,
    /// Cluster size -> number of clusters of that size, pooled over runs.
    pub histogram: BTreeMap<usize, usize>,
    /// Most frequent size among non-singleton clusters; ties go to the
    /// smaller size.
    pub mode: Option<usize>,
    /// Rank correlation of mean `K / N` against `N`.
    pub spearman: Option<f64>,
    pub decreasing_trend: bool,
}

/// Groups `partitions` by object count and summarizes each group.
pub fn noise_statistics(partitions: &[Partition]) -> NoiseStatistics {
    let mut groups: BTreeMap<usize, Vec<&Partition>> = BTreeMap::new();
    let mut histogram = BTreeMap::new();
    for p in partitions {
        groups.entry(p.len()).or_default().push(p);
        for size in p.cluster_sizes() {
            *histogram.entry(size).or_insert(0usize) += 1;
        }
    }
    let rows: Vec<NoiseRow> = groups
        .into_iter()
        .map(|(n, ps)| {
            let runs = ps.len();
            let k: Vec<f64> = ps.iter().map(|p| p.num_clusters() as f64).collect();
            let mean_clusters = k.iter().sum::<f64>() / runs as f64;
            NoiseRow {
                n,
                runs,
                mean_clusters,
                mean_normalized: if n == 0 {
                    0.0
                } else {
                    mean_clusters / n as f64
                },
            }
        })
        .collect();

    let mode = histogram
        .iter()
        .filter(|(&size, _)| size >= 2)
        .fold(
            None,
            |best: Option<(usize, usize)>, (&size, &count)| match best {
                Some((_, c)) if c >= count => best,
                _ => Some((size, count)),
            },
        )
        .map(|(size, _)| size);

    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_normalized).collect();
    let spearman = spearman(&xs, &ys);
    NoiseStatistics {
        decreasing_trend: spearman.is_some_and(|s| s <= TREND_THRESHOLD),
        rows,
        histogram,
        mode,
        spearman,
    }
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        // Average rank (1-based) over the tie group.
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties. `None` when
/// fewer than two points or either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let m = (x.len() + 1) as f64 / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - m) * (b - m);
        sxx += (a - m) * (a - m);
        syy += (b - m) * (b - m);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Clusters `seeds` student-t white-noise datasets per size and summarizes.
pub fn run_noise_suite(
    sizes: &[usize],
    length: usize,
    df: f64,
    seeds: usize,
    base_seed: u64,
) -> Result<NoiseStatistics> {
    let mut partitions = Vec::with_capacity(sizes.len() * seeds);
    for &n in sizes {
        for r in 0..seeds {
            let seed = derive_seed(base_seed, &[n as u64, r as u64]);
            let data = gen_white_noise(n, length, df, seed)?;
            let corr = estimate_correlation(&data)?;
            partitions.push(run(&corr, &EngineConfig::with_seed(seed))?.partition);
        }
    }
    Ok(noise_statistics(&partitions))
}
