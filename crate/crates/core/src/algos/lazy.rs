use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::LedgerSnapshot;
use crate::matroid::{Matroid, Partition};
use crate::oracle::{ElementId, Subset, ValueOracle};

use super::thresholding_with_rank;

/// Per-block buckets `T_{j,w}`: level index to the block's elements currently at that level.
type Buckets = Vec<BTreeMap<usize, BTreeSet<ElementId>>>;

/// Query and event tallies of one LinearGreedy call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinearGreedyStats {
    pub additions: u64,
    pub decays: u64,
    pub value_queries: u64,
    pub independence_queries: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearGreedyOutput {
    /// The set `M`, in acceptance order.
    pub set: Vec<ElementId>,
    /// `Σ_{u ∈ M} w_u` at the end of the call.
    pub weight_sum: f64,
    pub stats: LinearGreedyStats,
}

/// Mutable state of the random lazy greedy: the solution `S` (real elements plus a count of
/// dummies), its cached value, and the upper bounds `w_u ≥ f(u | S)`.
///
/// Each `w_u` is one of the levels `W(1-δ)^t` with `W(1-δ)^t > δW/k`; it is stored as the index
/// `t`, so comparisons against a level are exact. An element decayed past the last level is never
/// considered again.
#[derive(Debug, Clone)]
pub struct LazyGreedyState {
    candidates: Vec<ElementId>,
    rank: usize,
    delta: f64,
    top: f64,
    level_weights: Vec<f64>,
    levels: Vec<usize>,
    solution: Vec<ElementId>,
    in_solution: Vec<bool>,
    dummies: usize,
    value: f64,
    buckets: Option<(Partition, Buckets)>,
}

impl LazyGreedyState {
    /// Computes `f(∅)` and every singleton value (`1 + |candidates|` value queries) and sets
    /// `w_u = W` for all candidates.
    pub fn new(f: &ValueOracle, rank: usize, delta: f64, candidates: &[ElementId]) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1)")));
        }
        let n = f.ground_size();
        crate::error::check_ids(candidates, n)?;
        let empty = f.value(&[]);
        let top = candidates.iter().map(|&u| f.value(&[u]) - empty).fold(0.0, f64::max);
        let mut level_weights = Vec::new();
        if rank > 0 {
            let floor = delta * top / rank as f64;
            let mut w = top;
            while w > floor {
                level_weights.push(w);
                w *= 1.0 - delta;
            }
        }
        Ok(LazyGreedyState {
            candidates: candidates.to_vec(),
            rank,
            delta,
            top,
            level_weights,
            levels: vec![0; n],
            solution: Vec::new(),
            in_solution: vec![false; n],
            dummies: 0,
            value: empty,
            buckets: None,
        })
    }

    /// Like [`LazyGreedyState::new`], additionally building the per-block buckets used by
    /// [`LazyGreedyState::linear_greedy_partition`].
    pub fn with_partition(
        f: &ValueOracle,
        partition: &Partition,
        delta: f64,
        candidates: &[ElementId],
    ) -> Result<Self> {
        let mut state = Self::new(f, partition.rank(), delta, candidates)?;
        let mut buckets: Buckets = vec![BTreeMap::new(); partition.capacities().len()];
        if !state.level_weights.is_empty() {
            for &u in candidates {
                buckets[partition.block_of(u)].entry(0).or_default().insert(u);
            }
        }
        state.buckets = Some((partition.clone(), buckets));
        Ok(state)
    }

    pub fn top_value(&self) -> f64 {
        self.top
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_levels(&self) -> usize {
        self.level_weights.len()
    }

    /// Current `w_u`, or 0 once `u` has decayed past the last level.
    pub fn weight(&self, u: ElementId) -> f64 {
        self.level_weights.get(self.levels[u]).copied().unwrap_or(0.0)
    }

    pub fn level(&self, u: ElementId) -> usize {
        self.levels[u]
    }

    /// Real elements of `S`.
    pub fn solution(&self) -> Subset {
        Subset::new(self.solution.iter().copied())
    }

    pub fn dummies_in_solution(&self) -> usize {
        self.dummies
    }

    /// `|S|`, dummies included.
    pub fn solution_size(&self) -> usize {
        self.solution.len() + self.dummies
    }

    pub fn solution_value(&self) -> f64 {
        self.value
    }

    /// Adds a real element to `S`; one value query to refresh `f(S)`.
    pub fn add_to_solution(&mut self, f: &ValueOracle, u: ElementId) {
        if self.in_solution[u] {
            return;
        }
        self.value = f.value_with(&mut self.solution, u);
        self.solution.push(u);
        self.in_solution[u] = true;
        if let Some((p, buckets)) = &mut self.buckets {
            let block = &mut buckets[p.block_of(u)];
            if let Some(bucket) = block.get_mut(&self.levels[u]) {
                bucket.remove(&u);
                if bucket.is_empty() {
                    block.remove(&self.levels[u]);
                }
            }
        }
    }

    pub fn add_dummy(&mut self) {
        self.dummies += 1;
    }

    /// Sweeps the levels from the top; at level `t` every element with `w_u` at level `t` and
    /// `S ∪ M + u` independent is either added to `M` (if `f(u | S) > (1-δ)w_u`) or decayed one
    /// level. Dummies are not scanned; `|S ∪ M| ≤ k` is enforced as the dummy-augmented matroid
    /// would, still charging one independence query.
    pub fn linear_greedy(&mut self, f: &ValueOracle, m: &Matroid) -> LinearGreedyOutput {
        let before = f.ledger().snapshot();
        let mut stats = LinearGreedyStats::default();
        let mut scratch = self.solution.clone();
        let base_len = scratch.len();
        let room = self.rank.saturating_sub(self.solution_size());
        let candidates = std::mem::take(&mut self.candidates);
        for t in 0..self.level_weights.len() {
            let threshold = (1.0 - self.delta) * self.level_weights[t];
            for &u in &candidates {
                if self.levels[u] != t || self.in_solution[u] {
                    continue;
                }
                let independent = if scratch.len() - base_len >= room {
                    m.ledger().charge_independence();
                    false
                } else {
                    m.independent_with(&mut scratch, u)
                };
                if !independent {
                    continue;
                }
                let gain = f.value_with(&mut self.solution, u) - self.value;
                if gain <= threshold {
                    self.levels[u] += 1;
                    stats.decays += 1;
                } else {
                    scratch.push(u);
                    stats.additions += 1;
                }
            }
        }
        self.candidates = candidates;
        let set = scratch.split_off(base_len);
        self.finish(set, stats, before, f)
    }

    /// Bucket version for generalized partition matroids: each block `j` is scanned from its
    /// highest non-empty level until `|M_j|` reaches the block's residual capacity. No
    /// independence queries.
    pub fn linear_greedy_partition(&mut self, f: &ValueOracle) -> Result<LinearGreedyOutput> {
        let before = f.ledger().snapshot();
        let Some((partition, mut buckets)) = self.buckets.take() else {
            return Err(Error::InvalidInput(
                "state was not initialized with a partition matroid".into(),
            ));
        };
        let mut stats = LinearGreedyStats::default();
        let mut used = vec![0usize; partition.capacities().len()];
        for &u in &self.solution {
            used[partition.block_of(u)] += 1;
        }
        let mut room = self.rank.saturating_sub(self.solution_size());
        let mut set = Vec::new();
        for (j, block) in buckets.iter_mut().enumerate() {
            let cap = partition.capacities()[j].saturating_sub(used[j]);
            let mut taken = 0usize;
            let mut next_level = 0usize;
            'block: while let Some(level) = block.range(next_level..).next().map(|(&l, _)| l) {
                let threshold = (1.0 - self.delta) * self.level_weights[level];
                let members: Vec<ElementId> = block[&level].iter().copied().collect();
                for u in members {
                    if taken == cap || room == 0 {
                        break 'block;
                    }
                    let gain = f.value_with(&mut self.solution, u) - self.value;
                    if gain <= threshold {
                        let bucket = block.get_mut(&level).expect("level present");
                        bucket.remove(&u);
                        if bucket.is_empty() {
                            block.remove(&level);
                        }
                        self.levels[u] += 1;
                        if self.levels[u] < self.level_weights.len() {
                            block.entry(self.levels[u]).or_default().insert(u);
                        }
                        stats.decays += 1;
                    } else {
                        set.push(u);
                        taken += 1;
                        room -= 1;
                        stats.additions += 1;
                    }
                }
                next_level = level + 1;
            }
        }
        self.buckets = Some((partition, buckets));
        Ok(self.finish(set, stats, before, f))
    }

    fn finish(
        &self,
        set: Vec<ElementId>,
        mut stats: LinearGreedyStats,
        before: LedgerSnapshot,
        f: &ValueOracle,
    ) -> LinearGreedyOutput {
        let spent = f.ledger().snapshot().since(&before);
        stats.value_queries = spent.value_queries;
        stats.independence_queries = spent.independence_queries;
        let weight_sum = set.iter().map(|&u| self.weight(u)).sum();
        LinearGreedyOutput { set, weight_sum, stats }
    }
}

/// Result of a random lazy greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct LazyGreedyOutcome {
    /// `None` when the run declared failure.
    pub solution: Option<Subset>,
    /// Main-loop iterations executed.
    pub iterations: usize,
    pub rank: usize,
    pub opt_estimate: f64,
    /// One entry per LinearGreedy call.
    pub linear_greedy: Vec<LinearGreedyStats>,
    /// Queries spent by this run.
    pub queries: LedgerSnapshot,
}

impl LazyGreedyOutcome {
    pub fn failed(&self) -> bool {
        self.solution.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scan {
    General,
    Partition,
}

/// Random lazy greedy with the general LinearGreedy.
///
/// Iteration `i` builds `M_i`; if `(1-δ) Σ_{u∈M_i} w_u ≥ B · opt`, a uniformly random element of
/// `M_i` padded with dummies to `k - |S|` slots joins `S`, otherwise `S` is returned. After `I`
/// iterations without stopping the run fails. `opt` is three times the thresholding greedy value
/// at `ε = 1/6`. Requires `I ≤ k/2`.
pub fn random_lazy_greedy<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    delta: f64,
    b: f64,
    iterations: usize,
    rng: &mut R,
) -> Result<LazyGreedyOutcome> {
    let candidates: Vec<ElementId> = (0..f.ground_size()).collect();
    let rank = m.rank_of(&candidates);
    random_lazy_greedy_over(f, m, delta, b, iterations, &candidates, rank, Scan::General, rng)
}

/// Random lazy greedy using the bucketed partition LinearGreedy.
pub fn random_lazy_greedy_partition<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    delta: f64,
    b: f64,
    iterations: usize,
    rng: &mut R,
) -> Result<LazyGreedyOutcome> {
    let p = m
        .partition_structure()
        .ok_or_else(|| Error::InvalidInput("the partition variant needs a partition matroid".into()))?;
    let candidates: Vec<ElementId> = (0..f.ground_size())
        .filter(|&u| p.capacities()[p.block_of(u)] > 0)
        .collect();
    let rank = p.rank();
    random_lazy_greedy_over(f, m, delta, b, iterations, &candidates, rank, Scan::Partition, rng)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn random_lazy_greedy_over<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    delta: f64,
    b: f64,
    iterations: usize,
    candidates: &[ElementId],
    rank: usize,
    scan: Scan,
    rng: &mut R,
) -> Result<LazyGreedyOutcome> {
    let start = f.ledger().snapshot();
    if f.ground_size() != m.ground_size() {
        return Err(Error::InvalidInput(
            "objective and matroid have different ground sets".into(),
        ));
    }
    if b.is_nan() || b < 0.0 {
        return Err(Error::InvalidInput(format!("B = {b} must be non-negative")));
    }
    if 2 * iterations > rank {
        return Err(Error::InvalidInput(format!(
            "I = {iterations} exceeds k/2 = {}",
            rank as f64 / 2.0
        )));
    }
    let (_, crude) = thresholding_with_rank(f, m, 1.0 / 6.0, candidates, rank)?;
    let opt = 3.0 * crude;
    let mut state = match scan {
        Scan::General => LazyGreedyState::new(f, rank, delta, candidates)?,
        Scan::Partition => {
            let p = m.partition_structure().expect("checked by caller");
            LazyGreedyState::with_partition(f, p, delta, candidates)?
        }
    };

    let mut stats = Vec::new();
    for i in 1..=iterations {
        let out = match scan {
            Scan::General => state.linear_greedy(f, m),
            Scan::Partition => state.linear_greedy_partition(f)?,
        };
        stats.push(out.stats);
        if (1.0 - delta) * out.weight_sum >= b * opt {
            let slots = rank - state.solution_size();
            let pick = rng.gen_range(0..slots);
            match out.set.get(pick) {
                Some(&u) => state.add_to_solution(f, u),
                None => state.add_dummy(),
            }
        } else {
            return Ok(LazyGreedyOutcome {
                solution: Some(state.solution()),
                iterations: i,
                rank,
                opt_estimate: opt,
                linear_greedy: stats,
                queries: f.ledger().snapshot().since(&start),
            });
        }
    }
    Ok(LazyGreedyOutcome {
        solution: None,
        iterations,
        rank,
        opt_estimate: opt,
        linear_greedy: stats,
        queries: f.ledger().snapshot().since(&start),
    })
}
