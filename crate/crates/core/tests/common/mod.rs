#![allow(dead_code)]

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use submax::functions::{Coverage, DirectedCut, FacilityLocation, Modular};
use submax::{ElementId, QueryLedger, SetFunction, ValueOracle};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ledger() -> Arc<QueryLedger> {
    Arc::new(QueryLedger::new())
}

pub fn oracle<F: SetFunction + 'static>(f: F) -> ValueOracle {
    ValueOracle::new(f, ledger())
}

pub fn random_coverage(n: usize, universe: usize, density: f64, seed: u64) -> Coverage {
    let mut r = rng(seed);
    let sets = (0..n)
        .map(|_| {
            let mut s: Vec<usize> = (0..universe).filter(|_| r.gen::<f64>() < density).collect();
            if s.is_empty() {
                s.push(r.gen_range(0..universe));
            }
            s
        })
        .collect();
    let weights = (0..universe).map(|_| r.gen_range(1..=5) as f64).collect();
    Coverage::new(weights, sets).unwrap()
}

pub fn random_cut(n: usize, arcs: usize, seed: u64) -> DirectedCut {
    let mut r = rng(seed);
    let mut list = Vec::with_capacity(arcs);
    while list.len() < arcs {
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a != b {
            list.push((a, b, r.gen_range(1..=9) as f64));
        }
    }
    DirectedCut::new(n, list).unwrap()
}

pub fn random_facility(n: usize, clients: usize, seed: u64) -> FacilityLocation {
    let mut r = rng(seed);
    let benefits = (0..clients)
        .map(|_| (0..n).map(|_| r.gen_range(0.0..10.0)).collect())
        .collect();
    FacilityLocation::new(n, benefits).unwrap()
}

pub fn random_modular(n: usize, seed: u64) -> Modular {
    let mut r = rng(seed);
    Modular::new((0..n).map(|_| r.gen_range(0.0..10.0)).collect()).unwrap()
}

/// Small instances of every zoo family.
pub fn zoo(n: usize, seed: u64) -> Vec<(&'static str, Arc<dyn SetFunction>)> {
    vec![
        (
            "coverage",
            Arc::new(random_coverage(n, 3 * n, 0.2, seed)) as Arc<dyn SetFunction>,
        ),
        ("cut", Arc::new(random_cut(n, 3 * n, seed + 1))),
        ("facility", Arc::new(random_facility(n, 2 * n, seed + 2))),
        ("modular", Arc::new(random_modular(n, seed + 3))),
    ]
}

pub fn members(mask: usize, n: usize) -> Vec<ElementId> {
    (0..n).filter(|&u| mask >> u & 1 == 1).collect()
}

/// `max f(S)` over `|S| <= k` by enumerating all `2^n` masks.
pub fn brute_cardinality(f: &dyn SetFunction, k: usize) -> f64 {
    let n = f.ground_size();
    (0usize..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| f.eval(&members(m, n)))
        .fold(0.0, f64::max)
}

/// `max f(S)` over sets accepted by `independent`.
pub fn brute_matroid(f: &dyn SetFunction, independent: impl Fn(&[ElementId]) -> bool) -> f64 {
    let n = f.ground_size();
    (0usize..1 << n)
        .map(|m| members(m, n))
        .filter(|s| independent(s))
        .map(|s| f.eval(&s))
        .fold(0.0, f64::max)
}

/// Partition membership test written from scratch.
pub fn partition_ok(blocks: &[Vec<usize>], caps: &[usize], set: &[ElementId]) -> bool {
    blocks
        .iter()
        .zip(caps)
        .all(|(b, &c)| set.iter().filter(|u| b.contains(u)).count() <= c)
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Wraps a set function and counts raw evaluations, independently of the ledger.
#[derive(Debug)]
pub struct Shim {
    pub inner: Arc<dyn SetFunction>,
    pub calls: Arc<AtomicU64>,
}

impl SetFunction for Shim {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(set)
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }
}

pub fn shimmed(f: Arc<dyn SetFunction>) -> (ValueOracle, Arc<AtomicU64>) {
    let calls = Arc::new(AtomicU64::new(0));
    let shim = Shim {
        inner: f,
        calls: Arc::clone(&calls),
    };
    (ValueOracle::new(shim, ledger()), calls)
}
