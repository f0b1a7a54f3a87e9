//! Bootstrap consensus filtering for short, noisy series.
//!
//! Random subsets of `n` objects are clustered independently. Across
//! iterations the filter counts how often each pair was drawn together
//! (`f`) and how often it ended up in the same cluster (`d`). The ratio
//! `p = d / f` is thresholded at `omega` into an adjacency matrix whose
//! connected components form the final partition.
//!
//! Iteration `k` draws all of its randomness from `(seed, k)`, so batches
//! of iterations can be evaluated in parallel and folded in any order.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMatrix;
use crate::data::{estimate_correlation, DataMatrix};
use crate::engine::{run, EngineConfig};
use crate::error::{AlcError, Result};
use crate::evaluation::adjusted_rand_index;
use crate::partition::Partition;
use crate::synthetic::stream_rng;
use crate::union_find::DisjointSet;

pub const DEFAULT_MAX_ITER: usize = 2200;
pub const DEFAULT_ARI_STOP: f64 = 0.9;

/// Plateau stop: relative edge-count change below this...
pub const PLATEAU_TOLERANCE: f64 = 1e-3;
/// ...across at least this many iterations.
pub const PLATEAU_WINDOW: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSize {
    Fixed(usize),
    /// Target `q = D / n`; resolved as `n = round(D / q)`.
    TargetRatio(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub sample_size: SampleSize,
    pub omega: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub ground_truth: Option<Partition>,
    /// ARI at which to stop when `ground_truth` is set; `None` never stops
    /// early and only tracks the trajectory.
    pub ari_stop: Option<f64>,
    pub record_every: usize,
    /// Stop once the thresholded edge count plateaus. Not part of the
    /// original routine; off by default.
    pub plateau_stop: bool,
}

impl BootstrapConfig {
    pub fn new(sample_size: SampleSize, omega: f64) -> Self {
        BootstrapConfig {
            sample_size,
            omega,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            ground_truth: None,
            ari_stop: Some(DEFAULT_ARI_STOP),
            record_every: 10,
            plateau_stop: false,
        }
    }

    /// Resolves and validates `n` for `objects` series of length `length`.
    pub fn resolve_sample_size(&self, objects: usize, length: usize) -> Result<usize> {
        let n = match self.sample_size {
            SampleSize::Fixed(n) => n,
            SampleSize::TargetRatio(q) => {
                if !(q > 0.0 && q.is_finite()) {
                    return Err(AlcError::InvalidParameter(format!(
                        "target ratio q must be positive, got {q}"
                    )));
                }
                (length as f64 / q).round() as usize
            }
        };
        if n < 2 || n > objects {
            return Err(AlcError::InvalidParameter(format!(
                "sample size {n} must lie in [2, {objects}]"
            )));
        }
        Ok(n)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(AlcError::InvalidParameter(format!(
                "omega must lie in [0, 1], got {}",
                self.omega
            )));
        }
        if self.max_iter == 0 || self.record_every == 0 {
            return Err(AlcError::InvalidParameter(
                "max_iter and record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn effective_ari_stop(&self) -> Option<f64> {
        self.ground_truth.as_ref().and(self.ari_stop)
    }
}

/// Pair counters over `N` objects. Both matrices are symmetric with a zero
/// diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapState {
    n: usize,
    f: Vec<u32>,
    d: Vec<u32>,
    iterations: usize,
}

impl BootstrapState {
    pub fn new(n: usize) -> Self {
        BootstrapState {
            n,
            f: vec![0; n * n],
            d: vec![0; n * n],
            iterations: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn co_sampled(&self, i: usize, j: usize) -> u32 {
        self.f[i * self.n + j]
    }

    pub fn co_clustered(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    /// Accounts one clustered sample: `sample[k]` is an object index and
    /// `partition` groups positions `0..sample.len()`.
    pub fn record(&mut self, sample: &[usize], partition: &Partition) -> Result<()> {
        if partition.len() != sample.len() {
            return Err(AlcError::Internal(format!(
                "partition over {} objects for a sample of {}",
                partition.len(),
                sample.len()
            )));
        }
        let n = self.n;
        for (a, &i) in sample.iter().enumerate() {
            if i >= n {
                return Err(AlcError::Internal(format!(
                    "sampled index {i} out of range"
                )));
            }
            for (b, &j) in sample.iter().enumerate().skip(a + 1) {
                let together = u32::from(partition.same_cluster(a, b));
                self.f[i * n + j] += 1;
                self.f[j * n + i] += 1;
                self.d[i * n + j] += together;
                self.d[j * n + i] += together;
            }
        }
        self.iterations += 1;
        Ok(())
    }

    /// Adds another accumulator over the same objects.
    pub fn merge(&mut self, other: &BootstrapState) -> Result<()> {
        if other.n != self.n {
            return Err(AlcError::Internal(
                "merging states of different sizes".into(),
            ));
        }
        for (a, b) in self.f.iter_mut().zip(&other.f) {
            *a += b;
        }
        for (a, b) in self.d.iter_mut().zip(&other.d) {
            *a += b;
        }
        self.iterations += other.iterations;
        Ok(())
    }

    /// `p_ij = d_ij / f_ij`, and 0 for pairs never drawn together.
    pub fn probability_matrix(&self) -> ProbabilityMatrix {
        let values = self
            .f
            .iter()
            .zip(&self.d)
            .map(|(&f, &d)| if f == 0 { 0.0 } else { d as f64 / f as f64 })
            .collect();
        ProbabilityMatrix { n: self.n, values }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl ProbabilityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn summary(&self, state: &BootstrapState, omega: f64) -> ProbabilitySummary {
        let n = self.n;
        let (mut sampled, mut sum, mut ones, mut above) = (0u64, 0.0, 0u64, 0u64);
        for i in 0..n {
            for j in (i + 1)..n {
                if state.co_sampled(i, j) == 0 {
                    continue;
                }
                let p = self.get(i, j);
                sampled += 1;
                sum += p;
                ones += u64::from(p == 1.0);
                above += u64::from(p - omega > 0.0);
            }
        }
        ProbabilitySummary {
            pairs: (n * n.saturating_sub(1) / 2) as u64,
            sampled_pairs: sampled,
            mean_sampled: if sampled == 0 {
                0.0
            } else {
                sum / sampled as f64
            },
            certain_pairs: ones,
            edges: above,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilitySummary {
    pub pairs: u64,
    /// Pairs drawn together at least once.
    pub sampled_pairs: u64,
    pub mean_sampled: f64,
    /// Pairs with `p = 1`.
    pub certain_pairs: u64,
    /// Pairs with `p > omega`.
    pub edges: u64,
}

/// Dense symmetric 0/1 adjacency with an empty diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    bits: Vec<bool>,
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Adjacency {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Adjacency::empty(n);
        for i in 0..n {
            for j in 0..n {
                a.bits[i * n + j] = i != j;
            }
        }
        a
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.bits[i * self.n + j] = true;
            self.bits[j * self.n + i] = true;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count() / 2
    }
}

/// Edge wherever `p_ij - omega > 0`.
pub fn threshold_ordinal(p: &ProbabilityMatrix, omega: f64) -> Adjacency {
    let n = p.n;
    let mut adj = Adjacency::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if p.get(i, j) - omega > 0.0 {
                adj.add_edge(i, j);
            }
        }
    }
    adj
}

/// Connected components; isolated vertices become singletons.
pub fn components_partition(adj: &Adjacency) -> Partition {
    let n = adj.n;
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if adj.has_edge(i, j) {
                ds.union(i, j);
            }
        }
    }
    Partition::from_labels(&ds.roots())
}

/// Draws iteration `k`'s sample and clusters it. Pure in `(corr, n, seed, k)`.
pub fn sample_and_cluster(
    corr: &CorrelationMatrix,
    sample_size: usize,
    seed: u64,
    k: u64,
) -> Result<(Vec<usize>, Partition)> {
    if sample_size > corr.n() {
        return Err(AlcError::InvalidParameter(format!(
            "sample size {sample_size} exceeds {} objects",
            corr.n()
        )));
    }
    let mut rng = stream_rng(seed, k);
    let mut sample = index::sample(&mut rng, corr.n(), sample_size).into_vec();
    sample.sort_unstable();
    let engine = EngineConfig::with_seed(rng.random());
    let result = run(&corr.submatrix(&sample), &engine)?;
    Ok((sample, result.partition))
}

/// One resampling step folded into `state`.
pub fn bootstrap_iteration(
    corr: &CorrelationMatrix,
    state: &mut BootstrapState,
    sample_size: usize,
    seed: u64,
    k: u64,
) -> Result<()> {
    let (sample, partition) = sample_and_cluster(corr, sample_size, seed, k)?;
    state.record(&sample, &partition)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub ari: Option<f64>,
    pub edges: usize,
    pub clusters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIterations,
    AriReached,
    Plateau,
}

#[derive(Debug, Clone)]
pub struct BootstrapOutcome {
    pub partition: Partition,
    pub probability: ProbabilityMatrix,
    pub summary: ProbabilitySummary,
    pub trajectory: Vec<TrajectoryPoint>,
    pub state: BootstrapState,
    pub sample_size: usize,
    pub stop: StopReason,
}

/// Estimates correlations from `data` and runs the filter.
pub fn run_bootstrap(data: &DataMatrix, cfg: &BootstrapConfig) -> Result<BootstrapOutcome> {
    let n = cfg.resolve_sample_size(data.n(), data.d())?;
    let corr = estimate_correlation(data)?;
    run_bootstrap_on(&corr, n, cfg)
}

/// Runs the filter with an explicit sample size on a precomputed matrix.
pub fn run_bootstrap_on(
    corr: &CorrelationMatrix,
    sample_size: usize,
    cfg: &BootstrapConfig,
) -> Result<BootstrapOutcome> {
    cfg.validate()?;
    let objects = corr.n();
    if sample_size < 2 || sample_size > objects {
        return Err(AlcError::InvalidParameter(format!(
            "sample size {sample_size} must lie in [2, {objects}]"
        )));
    }
    if let Some(truth) = &cfg.ground_truth {
        if truth.len() != objects {
            return Err(AlcError::InvalidInput(format!(
                "ground truth covers {} objects, data has {objects}",
                truth.len()
            )));
        }
    }
    let ari_stop = cfg.effective_ari_stop();

    let mut state = BootstrapState::new(objects);
    let mut trajectory = Vec::new();
    let mut done = 0usize;
    let mut stop = StopReason::MaxIterations;
    let mut partition = Partition::singletons(objects);
    let mut probability = state.probability_matrix();

    while done < cfg.max_iter {
        let upto = ((done / cfg.record_every + 1) * cfg.record_every).min(cfg.max_iter);
        let batch: Vec<(Vec<usize>, Partition)> = (done..upto)
            .into_par_iter()
            .map(|k| sample_and_cluster(corr, sample_size, cfg.seed, k as u64))
            .collect::<Result<_>>()?;
        for (sample, p) in &batch {
            state.record(sample, p)?;
        }
        done = upto;

        probability = state.probability_matrix();
        let adj = threshold_ordinal(&probability, cfg.omega);
        partition = components_partition(&adj);
        let ari = cfg
            .ground_truth
            .as_ref()
            .map(|t| adjusted_rand_index(t, &partition).map(|r| r.ari))
            .transpose()?;
        let point = TrajectoryPoint {
            iteration: done,
            ari,
            edges: adj.edge_count(),
            clusters: partition.num_clusters(),
        };
        let plateaued = cfg.plateau_stop && plateau_reached(&trajectory, &point);
        trajectory.push(point);

        if let (Some(a), Some(target)) = (ari, ari_stop) {
            if a >= target {
                stop = StopReason::AriReached;
                break;
            }
        }
        if plateaued {
            stop = StopReason::Plateau;
            break;
        }
    }

    let summary = probability.summary(&state, cfg.omega);
    Ok(BootstrapOutcome {
        partition,
        probability,
        summary,
        trajectory,
        state,
        sample_size,
        stop,
    })
}

fn plateau_reached(history: &[TrajectoryPoint], now: &TrajectoryPoint) -> bool {
    let Some(then) = history
        .iter()
        .rev()
        .find(|p| p.iteration + PLATEAU_WINDOW <= now.iteration)
    else {
        return false;
    };
    let base = then.edges.max(1) as f64;
    (now.edges as f64 - then.edges as f64).abs() / base < PLATEAU_TOLERANCE
}
