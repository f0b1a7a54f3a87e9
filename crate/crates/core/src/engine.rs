//! Greedy agglomerative maximization of the cluster likelihood.
//!
//! The engine starts from singletons and repeatedly lets an initiator
//! cluster merge with whichever partner yields the largest Case-2 gain.
//! Cluster-level correlation sums are kept in a dense slot matrix and
//! updated in `O(K)` per merge, so no correlation is ever re-summed from
//! the object level.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMatrix;
use crate::error::{AlcError, Result};
use crate::likelihood::{raw_cluster_likelihood, ClusterStats, EPSILON_MERGE};
use crate::partition::Partition;

/// Cluster identifier. Objects start as labels `0..N`; every merge mints
/// the next unused label.
pub type Label = usize;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub seed: u64,
    /// Take initiators in ascending label order instead of at random.
    pub deterministic_order: bool,
    pub epsilon_merge: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            seed: 0,
            deterministic_order: false,
            epsilon_merge: EPSILON_MERGE,
        }
    }
}

impl EngineConfig {
    pub fn with_seed(seed: u64) -> Self {
        EngineConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn deterministic() -> Self {
        EngineConfig {
            deterministic_order: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// A merged cluster reached `c_s >= n_s^2` (duplicate or perfectly
    /// correlated series) and was evaluated at the clamp.
    ClampedUpperBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub partition: Partition,
    pub likelihood: f64,
    pub merges: usize,
    pub warnings: Vec<Warning>,
    pub elapsed_seconds: f64,
}

/// Mutable engine state: tracker, aggregated correlation store and the
/// initiator queue.
#[derive(Debug, Clone)]
pub struct EngineState {
    slots: usize,
    agg: Vec<f64>,
    slot_label: Vec<Label>,
    slot_members: Vec<Vec<usize>>,
    slot_likelihood: Vec<f64>,
    live: Vec<usize>,
    live_pos: Vec<usize>,
    label_slot: Vec<usize>,
    active: Vec<Label>,
    active_pos: Vec<usize>,
    epsilon_merge: f64,
    merges: usize,
    clamped: bool,
}

impl EngineState {
    /// Singleton configuration over `corr`.
    pub fn init(corr: &CorrelationMatrix) -> Result<Self> {
        let n = corr.n();
        if n < 2 {
            return Err(AlcError::InvalidInput(format!(
                "need at least 2 objects to cluster, got {n}"
            )));
        }
        Ok(EngineState {
            slots: n,
            agg: corr.as_slice().to_vec(),
            slot_label: (0..n).collect(),
            slot_members: (0..n).map(|i| vec![i]).collect(),
            slot_likelihood: vec![0.0; n],
            live: (0..n).collect(),
            live_pos: (0..n).collect(),
            label_slot: (0..n).collect(),
            active: (0..n).collect(),
            active_pos: (0..n).collect(),
            epsilon_merge: EPSILON_MERGE,
            merges: 0,
            clamped: false,
        })
    }

    pub fn set_epsilon_merge(&mut self, epsilon: f64) -> Result<()> {
        if !(epsilon >= 0.0) {
            return Err(AlcError::InvalidParameter(format!(
                "epsilon_merge must be non-negative, got {epsilon}"
            )));
        }
        self.epsilon_merge = epsilon;
        Ok(())
    }

    fn slot_of(&self, label: Label) -> Result<usize> {
        match self.label_slot.get(label) {
            Some(&s) if s != NONE => Ok(s),
            _ => Err(AlcError::Internal(format!("stale cluster label {label}"))),
        }
    }

    #[inline]
    fn s(&self, a: usize, b: usize) -> f64 {
        self.agg[a * self.slots + b]
    }

    /// Current cluster labels, in no particular order.
    pub fn labels(&self) -> Vec<Label> {
        self.live.iter().map(|&s| self.slot_label[s]).collect()
    }

    pub fn num_clusters(&self) -> usize {
        self.live.len()
    }

    pub fn next_label(&self) -> Label {
        self.label_slot.len()
    }

    pub fn members(&self, label: Label) -> Result<&[usize]> {
        Ok(&self.slot_members[self.slot_of(label)?])
    }

    pub fn stats(&self, label: Label) -> Result<ClusterStats> {
        let s = self.slot_of(label)?;
        Ok(ClusterStats::new(self.slot_members[s].len(), self.s(s, s)))
    }

    /// Aggregated correlation `S_ab` (or `c_a` when `a == b`).
    pub fn aggregated(&self, a: Label, b: Label) -> Result<f64> {
        Ok(self.s(self.slot_of(a)?, self.slot_of(b)?))
    }

    /// Label -> members for every current cluster.
    pub fn tracker(&self) -> BTreeMap<Label, Vec<usize>> {
        self.live
            .iter()
            .map(|&s| (self.slot_label[s], self.slot_members[s].clone()))
            .collect()
    }

    pub fn active_queue(&self) -> &[Label] {
        &self.active
    }

    pub fn merges(&self) -> usize {
        self.merges
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// Sum of the cached per-cluster likelihoods.
    pub fn likelihood(&self) -> f64 {
        self.live.iter().map(|&s| self.slot_likelihood[s]).sum()
    }

    pub fn partition(&self) -> Partition {
        let n: usize = self.live.iter().map(|&s| self.slot_members[s].len()).sum();
        let mut raw = vec![0usize; n];
        for &s in &self.live {
            for &i in &self.slot_members[s] {
                raw[i] = s;
            }
        }
        Partition::from_labels(&raw)
    }

    /// Best Case-2 partner for `initiator` among all other clusters, if its
    /// gain exceeds `epsilon_merge`. Ties go to the smaller partner label;
    /// merges that would violate `c_s >= n_s` are never proposed.
    pub fn best_merge(&self, initiator: Label) -> Result<Option<(Label, f64)>> {
        let a = self.slot_of(initiator)?;
        let na = self.slot_members[a].len();
        let ca = self.s(a, a);
        let la = self.slot_likelihood[a];
        let row = &self.agg[a * self.slots..(a + 1) * self.slots];

        let mut best: Option<(Label, f64)> = None;
        for &t in &self.live {
            if t == a {
                continue;
            }
            let n = na + self.slot_members[t].len();
            let c = ca + self.s(t, t) + 2.0 * row[t];
            let Some((merged, _)) = raw_cluster_likelihood(n, c) else {
                continue;
            };
            let delta = merged - la - self.slot_likelihood[t];
            let label = self.slot_label[t];
            best = match best {
                Some((bl, bd)) if delta < bd || (delta == bd && label > bl) => Some((bl, bd)),
                _ => Some((label, delta)),
            };
        }
        Ok(best.filter(|&(_, d)| d > self.epsilon_merge))
    }

    /// Merges `a` and `b` into a freshly minted label and returns it.
    pub fn apply_merge(&mut self, a: Label, b: Label) -> Result<Label> {
        if a == b {
            return Err(AlcError::Internal(format!(
                "cannot merge label {a} with itself"
            )));
        }
        let sa = self.slot_of(a)?;
        let sb = self.slot_of(b)?;
        let n = self.slots;

        let c = self.s(sa, sa) + self.s(sb, sb) + 2.0 * self.s(sa, sb);
        for &t in &self.live {
            if t == sa || t == sb {
                continue;
            }
            let v = self.agg[sa * n + t] + self.agg[sb * n + t];
            self.agg[sa * n + t] = v;
            self.agg[t * n + sa] = v;
        }
        self.agg[sa * n + sa] = c;

        let moved = std::mem::take(&mut self.slot_members[sb]);
        self.slot_members[sa].extend(moved);
        let size = self.slot_members[sa].len();
        let (lik, clamped) = raw_cluster_likelihood(size, c).ok_or_else(|| {
            AlcError::Internal(format!(
                "merge of {a} and {b} violates c_s >= n_s (n = {size}, c = {c})"
            ))
        })?;
        self.slot_likelihood[sa] = lik;
        self.slot_likelihood[sb] = 0.0;
        self.clamped |= clamped;

        self.remove_live(sb);
        self.dequeue(a);
        self.dequeue(b);

        let k = self.label_slot.len();
        self.label_slot[a] = NONE;
        self.label_slot[b] = NONE;
        self.label_slot.push(sa);
        self.slot_label[sa] = k;
        self.slot_label[sb] = NONE;
        self.active_pos.push(NONE);
        self.enqueue(k);
        self.merges += 1;
        Ok(k)
    }

    fn remove_live(&mut self, slot: usize) {
        let pos = self.live_pos[slot];
        self.live.swap_remove(pos);
        if let Some(&moved) = self.live.get(pos) {
            self.live_pos[moved] = pos;
        }
        self.live_pos[slot] = NONE;
    }

    fn enqueue(&mut self, label: Label) {
        self.active_pos[label] = self.active.len();
        self.active.push(label);
    }

    /// Removes `label` from the initiator queue; no-op if absent.
    pub fn dequeue(&mut self, label: Label) {
        let Some(&pos) = self.active_pos.get(label) else {
            return;
        };
        if pos == NONE {
            return;
        }
        self.active.swap_remove(pos);
        if let Some(&moved) = self.active.get(pos) {
            self.active_pos[moved] = pos;
        }
        self.active_pos[label] = NONE;
    }

    fn pick_initiator(&self, cfg: &EngineConfig, rng: &mut ChaCha8Rng) -> Option<Label> {
        if self.active.is_empty() {
            return None;
        }
        if cfg.deterministic_order {
            self.active.iter().copied().min()
        } else {
            Some(self.active[rng.random_range(0..self.active.len())])
        }
    }
}

/// Clusters `corr` to a local likelihood maximum.
pub fn run(corr: &CorrelationMatrix, cfg: &EngineConfig) -> Result<ClusterResult> {
    run_observed(corr, cfg, |_| {})
}

/// [`run`], calling `observer` after every merge.
pub fn run_observed<F>(
    corr: &CorrelationMatrix,
    cfg: &EngineConfig,
    mut observer: F,
) -> Result<ClusterResult>
where
    F: FnMut(&EngineState),
{
    let start = Instant::now();
    let mut state = EngineState::init(corr)?;
    state.set_epsilon_merge(cfg.epsilon_merge)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    while let Some(initiator) = state.pick_initiator(cfg, &mut rng) {
        match state.best_merge(initiator)? {
            Some((partner, _)) => {
                state.apply_merge(initiator, partner)?;
                observer(&state);
            }
            None => state.dequeue(initiator),
        }
    }

    let likelihood = state
        .live
        .iter()
        .map(|&s| {
            raw_cluster_likelihood(state.slot_members[s].len(), state.s(s, s))
                .map(|(v, _)| v)
                .ok_or_else(|| AlcError::Internal("final cluster violates c_s >= n_s".into()))
        })
        .sum::<Result<f64>>()?;
    let mut warnings = Vec::new();
    if state.clamped {
        warnings.push(Warning::ClampedUpperBound);
    }
    Ok(ClusterResult {
        partition: state.partition(),
        likelihood,
        merges: state.merges,
        warnings,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn corr(rows: &[Vec<f64>]) -> CorrelationMatrix {
        CorrelationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn init_is_singletons() {
        let c = corr(&[
            vec![1.0, 0.3, 0.1],
            vec![0.3, 1.0, 0.2],
            vec![0.1, 0.2, 1.0],
        ]);
        let st = EngineState::init(&c).unwrap();
        let tracker = st.tracker();
        assert_eq!(tracker.len(), 3);
        assert_eq!(tracker[&1], vec![1]);
        assert_eq!(st.aggregated(0, 1).unwrap(), 0.3);
        assert_eq!(st.aggregated(2, 2).unwrap(), 1.0);
        assert_eq!(st.active_queue(), &[0, 1, 2]);
        assert_eq!(st.likelihood(), 0.0);
        assert!(EngineState::init(&CorrelationMatrix::identity(1)).is_err());
    }

    #[test]
    fn best_merge_examples() {
        let c = corr(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
        let st = EngineState::init(&c).unwrap();
        let (partner, delta) = st.best_merge(0).unwrap().unwrap();
        assert_eq!(partner, 1);
        assert_abs_diff_eq!(delta, 0.5 * (4.0f64 / 3.0).ln(), epsilon = 1e-15);

        let st = EngineState::init(&CorrelationMatrix::identity(3)).unwrap();
        assert_eq!(st.best_merge(0).unwrap(), None);
        assert!(st.best_merge(7).is_err());
    }

    #[test]
    fn ties_go_to_smaller_label() {
        let c = corr(&[
            vec![1.0, 0.4, 0.4],
            vec![0.4, 1.0, 0.0],
            vec![0.4, 0.0, 1.0],
        ]);
        let st = EngineState::init(&c).unwrap();
        assert_eq!(st.best_merge(0).unwrap().unwrap().0, 1);
    }

    #[test]
    fn apply_merge_updates_store() {
        let c = corr(&[
            vec![1.0, 0.5, 0.2],
            vec![0.5, 1.0, 0.3],
            vec![0.2, 0.3, 1.0],
        ]);
        let mut st = EngineState::init(&c).unwrap();
        let k = st.apply_merge(0, 1).unwrap();
        assert_eq!(k, 3);
        assert_eq!(st.aggregated(k, k).unwrap(), 3.0);
        assert_abs_diff_eq!(st.aggregated(k, 2).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(st.members(k).unwrap(), &[0, 1]);
        assert!(st.members(0).is_err());
        assert_eq!(st.active_queue(), &[2, 3]);
        assert!(st.apply_merge(2, 2).is_err());
        assert!(st.apply_merge(0, 2).is_err());
    }

    #[test]
    fn merge_sizes_add_up() {
        let mut st = EngineState::init(&CorrelationMatrix::identity(5)).unwrap();
        let a = st.apply_merge(0, 1).unwrap();
        let b = st.apply_merge(2, 3).unwrap();
        let b = st.apply_merge(b, 4).unwrap();
        let k = st.apply_merge(a, b).unwrap();
        assert_eq!(st.stats(k).unwrap().n, 5);
        assert_eq!(st.stats(k).unwrap().c, 5.0);
    }

    #[test]
    fn run_two_objects() {
        let c = corr(&[vec![1.0, 0.9], vec![0.9, 1.0]]);
        let r = run(&c, &EngineConfig::default()).unwrap();
        assert_eq!(r.partition, Partition::single_cluster(2));
        // c = 1 + 1 + 2 * 0.9 = 3.8, so L = 0.5 * ln(2^2 / (3.8 * 0.2)).
        assert_abs_diff_eq!(r.likelihood, 0.830_365_603_410_825_1, epsilon = 1e-12);
        assert_eq!(r.merges, 1);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn run_identity_is_all_singletons() {
        let r = run(&CorrelationMatrix::identity(5), &EngineConfig::default()).unwrap();
        assert_eq!(r.partition, Partition::singletons(5));
        assert_eq!(r.likelihood, 0.0);
        assert_eq!(r.merges, 0);
    }

    #[test]
    fn duplicates_merge_with_warning() {
        let c = corr(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let r = run(&c, &EngineConfig::default()).unwrap();
        assert_eq!(r.partition.num_clusters(), 1);
        assert_eq!(r.warnings, vec![Warning::ClampedUpperBound]);
    }

    #[test]
    fn rejects_negative_epsilon() {
        let cfg = EngineConfig {
            epsilon_merge: -1.0,
            ..Default::default()
        };
        assert!(run(&CorrelationMatrix::identity(3), &cfg).is_err());
    }
}
