//! Algorithms for `max f(S)` subject to `|S| <= k`.
//!
//! Objectives may be non-monotone unless stated otherwise. Every algorithm reports its per-iteration
//! choices, so that inclusion frequencies can be measured.

mod lazy;
mod sampling;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::ledger::LedgerSnapshot;
use crate::oracle::{ElementId, Subset, ValueOracle};

pub use lazy::{lazy_greedy_improved, lazy_greedy_simple, Insertion, LazyCardinalityOutcome};
pub use sampling::{
    delta_star, draw_rank, random_sampling, random_sampling_monotone, random_sampling_nonmonotone, SamplingParams,
};

/// What one iteration added to the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pick {
    Real(ElementId),
    Dummy,
    /// Nothing new: the chosen element had a negative marginal or was already in `S`.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityOutcome {
    pub solution: Subset,
    pub picks: Vec<Pick>,
    pub queries: LedgerSnapshot,
}

/// Standard greedy: `k` rounds, each evaluating `f(S + u)` for all `n` elements and adding the
/// argmax (smallest id on ties). Exactly `1 + nk` value queries.
pub fn standard_greedy(f: &ValueOracle, k: usize) -> Result<CardinalityOutcome> {
    let start = f.ledger().snapshot();
    let n = f.ground_size();
    let mut solution = Vec::with_capacity(k);
    let mut in_solution = vec![false; n];
    f.value(&[]);
    let mut picks = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, ElementId)> = None;
        for u in 0..n {
            let v = f.value_with(&mut solution, u);
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, u));
            }
        }
        match best {
            Some((_, u)) if !in_solution[u] => {
                solution.push(u);
                in_solution[u] = true;
                picks.push(Pick::Real(u));
            }
            _ => picks.push(Pick::None),
        }
    }
    Ok(CardinalityOutcome {
        solution: Subset::new(solution),
        picks,
        queries: f.ledger().snapshot().since(&start),
    })
}

/// Random greedy: each round scores every element outside `S`, pads with `k` zero-marginal
/// dummies, takes the `k` largest marginals (ties broken uniformly at random) and adds a uniform
/// member of that set. `1 + Σ_i (n - |S_{i-1}|)` value queries.
pub fn random_greedy<R: Rng + ?Sized>(f: &ValueOracle, k: usize, rng: &mut R) -> Result<CardinalityOutcome> {
    let start = f.ledger().snapshot();
    let n = f.ground_size();
    let mut solution = Vec::with_capacity(k);
    let mut in_solution = vec![false; n];
    let mut value = f.value(&[]);
    let mut picks = Vec::with_capacity(k);
    let mut pool: Vec<(f64, Option<(ElementId, f64)>)> = Vec::with_capacity(n + k);
    for _ in 0..k {
        pool.clear();
        for u in (0..n).filter(|&u| !in_solution[u]) {
            let v = f.value_with(&mut solution, u);
            pool.push((v - value, Some((u, v))));
        }
        pool.extend(std::iter::repeat_n((0.0, None), k));
        pool.shuffle(rng);
        pool.sort_by(|a, b| b.0.total_cmp(&a.0));
        match pool[rng.gen_range(0..k)].1 {
            Some((u, v)) => {
                solution.push(u);
                in_solution[u] = true;
                value = v;
                picks.push(Pick::Real(u));
            }
            None => picks.push(Pick::Dummy),
        }
    }
    Ok(CardinalityOutcome {
        solution: Subset::new(solution),
        picks,
        queries: f.ledger().snapshot().since(&start),
    })
}
