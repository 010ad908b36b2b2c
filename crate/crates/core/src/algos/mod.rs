//! Discrete algorithms for a monotone objective under a matroid constraint.

mod combined;
mod lazy;

pub use combined::{
    choose_lambda, combined_algorithm, CombinedMode, CombinedOutcome, CombinedParams, InternalParameters,
};
pub use lazy::{
    random_lazy_greedy, random_lazy_greedy_partition, LazyGreedyOutcome, LazyGreedyState, LinearGreedyOutput,
    LinearGreedyStats,
};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::oracle::{ElementId, Subset, ValueOracle};

/// Thresholding greedy: with `W` the largest singleton value, sweeps `w = W(1-ε)^t` while
/// `w > εW/k` and adds every `u` with `S + u` independent and `f(u | S) >= w`.
///
/// Deterministic. Uses `n` independence queries to find the rank `k`, then at most `n` value and
/// `n` independence queries per threshold level.
pub fn thresholding_greedy(f: &ValueOracle, m: &Matroid, eps: f64) -> Result<Subset> {
    let candidates: Vec<ElementId> = (0..f.ground_size()).collect();
    thresholding_greedy_valued(f, m, eps, &candidates).map(|(s, _)| s)
}

pub(crate) fn thresholding_greedy_valued(
    f: &ValueOracle,
    m: &Matroid,
    eps: f64,
    candidates: &[ElementId],
) -> Result<(Subset, f64)> {
    let k = m.rank_of(candidates);
    thresholding_with_rank(f, m, eps, candidates, k)
}

pub(crate) fn thresholding_with_rank(
    f: &ValueOracle,
    m: &Matroid,
    eps: f64,
    candidates: &[ElementId],
    k: usize,
) -> Result<(Subset, f64)> {
    let n = f.ground_size();
    if m.ground_size() != n {
        return Err(Error::InvalidInput(format!(
            "objective has {n} elements but the matroid has {}",
            m.ground_size()
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if !f.is_monotone() {
        return Err(Error::Precondition(
            "thresholding greedy requires a monotone objective".into(),
        ));
    }
    let empty = f.value(&[]);
    let top = candidates.iter().map(|&u| f.value(&[u]) - empty).fold(0.0, f64::max);
    if top <= 0.0 || k == 0 {
        return Ok((Subset::empty(), empty));
    }

    let floor = eps * top / k as f64;
    let mut solution: Vec<ElementId> = Vec::with_capacity(k);
    let mut value = empty;
    // once S + u is dependent it stays dependent as S grows
    let mut settled = vec![false; n];
    let mut w = top;
    while w > floor && solution.len() < k {
        for &u in candidates {
            if solution.len() == k {
                break;
            }
            if settled[u] {
                continue;
            }
            if !m.independent_with(&mut solution, u) {
                settled[u] = true;
                continue;
            }
            let with_u = f.value_with(&mut solution, u);
            if with_u - value >= w {
                solution.push(u);
                settled[u] = true;
                value = with_u;
            }
        }
        w *= 1.0 - eps;
    }
    Ok((Subset::new(solution), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Modular;
    use crate::QueryLedger;
    use std::sync::Arc;

    fn modular(weights: Vec<f64>) -> (ValueOracle, Arc<QueryLedger>) {
        let ledger = Arc::new(QueryLedger::new());
        (
            ValueOracle::new(Modular::new(weights).unwrap(), Arc::clone(&ledger)),
            ledger,
        )
    }

    #[test]
    fn single_element() {
        let (f, ledger) = modular(vec![2.0]);
        let m = Matroid::uniform(1, 1, ledger);
        assert_eq!(thresholding_greedy(&f, &m, 0.3).unwrap(), Subset::new([0]));
    }

    #[test]
    fn modular_top_k() {
        let (f, ledger) = modular(vec![1.0, 9.0, 3.0, 8.0, 2.0, 7.0]);
        let m = Matroid::uniform(6, 3, ledger);
        let s = thresholding_greedy(&f, &m, 0.05).unwrap();
        assert_eq!(s, Subset::new([1, 3, 5]));
    }

    #[test]
    fn zero_objective_returns_empty() {
        let (f, ledger) = modular(vec![0.0; 4]);
        let m = Matroid::uniform(4, 2, ledger);
        assert!(thresholding_greedy(&f, &m, 0.2).unwrap().is_empty());
    }

    #[test]
    fn eps_out_of_range() {
        let (f, ledger) = modular(vec![1.0]);
        let m = Matroid::uniform(1, 1, ledger);
        assert!(thresholding_greedy(&f, &m, 1.0).is_err());
        assert!(thresholding_greedy(&f, &m, 0.0).is_err());
    }
}
