//! Exhaustive optima for small instances. Evaluations go through uncounted oracle clones.

use submax::{ElementId, Matroid, Subset, ValueOracle};
use thiserror::Error;

pub const MAX_CARDINALITY_ELEMENTS: usize = 20;
pub const MAX_INDEPENDENT_SETS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum BruteForceError {
    #[error("{0} elements exceed the exhaustive-search limit of {MAX_CARDINALITY_ELEMENTS}")]
    TooManyElements(usize),
    #[error("more than {MAX_INDEPENDENT_SETS} independent sets")]
    TooManySets,
}

/// `max f(S)` over `|S| <= k`, first maximiser in lexicographic order.
pub fn brute_force_cardinality(f: &ValueOracle, k: usize) -> Result<(f64, Subset), BruteForceError> {
    let n = f.ground_size();
    if n > MAX_CARDINALITY_ELEMENTS {
        return Err(BruteForceError::TooManyElements(n));
    }
    let f = f.uncounted();
    let eval = |s: &[ElementId]| f.evaluate(s).expect("ids in range");
    let mut best = (eval(&[]), Vec::new());
    let mut current = Vec::with_capacity(k);
    fn dfs(
        start: usize,
        n: usize,
        k: usize,
        current: &mut Vec<ElementId>,
        best: &mut (f64, Vec<ElementId>),
        eval: &dyn Fn(&[ElementId]) -> f64,
    ) {
        if current.len() == k {
            return;
        }
        for u in start..n {
            current.push(u);
            let v = eval(current);
            if v > best.0 {
                *best = (v, current.clone());
            }
            dfs(u + 1, n, k, current, best, eval);
            current.pop();
        }
    }
    dfs(0, n, k, &mut current, &mut best, &eval);
    Ok((best.0, Subset::new(best.1)))
}

/// `max f(S)` over independent sets, by depth-first search that only extends independent sets.
pub fn brute_force_matroid(f: &ValueOracle, m: &Matroid) -> Result<(f64, Subset), BruteForceError> {
    let n = f.ground_size();
    let f = f.uncounted();
    let m = m.uncounted();
    let mut best = (f.evaluate(&[]).expect("empty set"), Vec::new());
    let mut visited = 1usize;
    let mut stack: Vec<(Vec<ElementId>, usize)> = vec![(Vec::new(), 0)];
    while let Some((set, start)) = stack.pop() {
        for u in (start..n).rev() {
            let mut next = set.clone();
            next.push(u);
            if !m.is_independent(&next).expect("ids in range") {
                continue;
            }
            visited += 1;
            if visited > MAX_INDEPENDENT_SETS {
                return Err(BruteForceError::TooManySets);
            }
            let v = f.evaluate(&next).expect("ids in range");
            if v > best.0 || (v == best.0 && next.len() < best.1.len()) {
                best = (v, next.clone());
            }
            stack.push((next, u + 1));
        }
    }
    Ok((best.0, Subset::new(best.1)))
}
