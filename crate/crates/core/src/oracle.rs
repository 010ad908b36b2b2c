//! Counted value oracles, canonical subsets and exhaustive property checks.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{check_ids, Error, Result};
use crate::ledger::QueryLedger;

/// Index of an element of the ground set `0..n`.
pub type ElementId = usize;

/// A set of elements kept in canonical (sorted, duplicate-free) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(Vec<ElementId>);

impl Subset {
    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = ElementId>>(ids: I) -> Self {
        let mut v: Vec<ElementId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    /// Returns `true` if `id` was not already present.
    pub fn insert(&mut self, id: ElementId) -> bool {
        match self.0.binary_search(&id) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, id);
                true
            }
        }
    }

    pub fn remove(&mut self, id: ElementId) -> bool {
        match self.0.binary_search(&id) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        Subset(self.iter().filter(|&u| !other.contains(u)).collect())
    }

    /// Keeps only the elements accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(ElementId) -> bool) -> Subset {
        Subset(self.iter().filter(|&u| keep(u)).collect())
    }

    pub fn into_vec(self) -> Vec<ElementId> {
        self.0
    }
}

impl FromIterator<ElementId> for Subset {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        Subset::new(iter)
    }
}

impl From<Vec<ElementId>> for Subset {
    fn from(v: Vec<ElementId>) -> Self {
        Subset::new(v)
    }
}

impl AsRef<[ElementId]> for Subset {
    fn as_ref(&self) -> &[ElementId] {
        &self.0
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

/// A non-negative set function over the ground set `0..ground_size()`.
///
/// `eval` receives element ids in any order and possibly with repetitions; implementations
/// treat the input as a set. Evaluation here is raw and uncounted: counting happens in
/// [`ValueOracle`].
pub trait SetFunction: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;

    fn eval(&self, set: &[ElementId]) -> f64;

    /// Whether the function is known to be monotone. Algorithms that rely on monotonicity
    /// refuse to run when this is `false`.
    fn is_monotone(&self) -> bool;
}

/// Handle to a set function whose every evaluation is charged to a ledger.
#[derive(Clone)]
pub struct ValueOracle {
    function: Arc<dyn SetFunction>,
    ledger: Arc<QueryLedger>,
}

impl fmt::Debug for ValueOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueOracle")
            .field("function", &self.function)
            .field("ledger", &self.ledger.snapshot())
            .finish()
    }
}

impl ValueOracle {
    pub fn new<F: SetFunction + 'static>(function: F, ledger: Arc<QueryLedger>) -> Self {
        Self::from_arc(Arc::new(function), ledger)
    }

    pub fn from_arc(function: Arc<dyn SetFunction>, ledger: Arc<QueryLedger>) -> Self {
        ValueOracle { function, ledger }
    }

    pub fn ground_size(&self) -> usize {
        self.function.ground_size()
    }

    pub fn is_monotone(&self) -> bool {
        self.function.is_monotone()
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn function(&self) -> &Arc<dyn SetFunction> {
        &self.function
    }

    /// Same function, charging `ledger` instead.
    pub fn with_ledger(&self, ledger: Arc<QueryLedger>) -> Self {
        ValueOracle {
            function: Arc::clone(&self.function),
            ledger,
        }
    }

    /// Same function on a private ledger nobody reads. Used for analysis-side evaluations.
    pub fn uncounted(&self) -> Self {
        self.with_ledger(Arc::new(QueryLedger::new()))
    }

    /// `f(S)`; one value query.
    pub fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        check_ids(set, self.ground_size())?;
        Ok(self.value(set))
    }

    /// `f(u | S) = f(S + u) - f(S)`. Costs one query when `cached_value` holds `f(S)`, two
    /// otherwise.
    pub fn marginal(&self, u: ElementId, set: &[ElementId], cached_value: Option<f64>) -> Result<f64> {
        check_ids(set, self.ground_size())?;
        check_ids(&[u], self.ground_size())?;
        let base = match cached_value {
            Some(v) => v,
            None => self.value(set),
        };
        let mut with_u = Vec::with_capacity(set.len() + 1);
        with_u.extend_from_slice(set);
        with_u.push(u);
        Ok(self.value(&with_u) - base)
    }

    /// Counted evaluation without range checks; algorithm internals only build valid sets.
    pub(crate) fn value(&self, set: &[ElementId]) -> f64 {
        self.ledger.charge_value();
        self.function.eval(set)
    }

    /// Counted `f(S + u)` reusing `scratch` as the buffer for `S`.
    pub(crate) fn value_with(&self, scratch: &mut Vec<ElementId>, u: ElementId) -> f64 {
        scratch.push(u);
        let v = self.value(scratch);
        scratch.pop();
        v
    }

    /// The residual objective `g(T) = f(S ∪ T) - f(S)`, sharing this oracle's ledger.
    ///
    /// Computing `f(S)` costs one query; every later evaluation of `g` costs exactly one.
    pub fn conditioned(&self, set: &[ElementId]) -> Result<ValueOracle> {
        let base_value = self.evaluate(set)?;
        let residual = Conditioned {
            base: Arc::clone(&self.function),
            fixed: set.to_vec(),
            base_value,
        };
        Ok(ValueOracle::new(residual, Arc::clone(&self.ledger)))
    }
}

#[derive(Debug)]
struct Conditioned {
    base: Arc<dyn SetFunction>,
    fixed: Vec<ElementId>,
    base_value: f64,
}

impl SetFunction for Conditioned {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut all = Vec::with_capacity(self.fixed.len() + set.len());
        all.extend_from_slice(&self.fixed);
        all.extend_from_slice(set);
        self.base.eval(&all) - self.base_value
    }

    fn is_monotone(&self) -> bool {
        self.base.is_monotone()
    }
}

const EXHAUSTIVE_LIMIT: usize = 12;

fn value_table(f: &dyn SetFunction) -> Result<Vec<f64>> {
    let n = f.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "exhaustive checks support at most {EXHAUSTIVE_LIMIT} elements, got {n}"
        )));
    }
    let mut members = Vec::with_capacity(n);
    Ok((0u32..1 << n)
        .map(|mask| {
            members.clear();
            members.extend((0..n).filter(|&i| mask >> i & 1 == 1));
            f.eval(&members)
        })
        .collect())
}

fn tolerance(a: f64, b: f64) -> f64 {
    1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Verifies `f(u | A) >= f(u | B)` for every `A ⊆ B` and `u ∉ B` by enumeration. Uncounted.
pub fn check_submodular(f: &ValueOracle) -> Result<bool> {
    let n = f.ground_size();
    let table = value_table(f.function().as_ref())?;
    for b in 0usize..1 << n {
        for u in (0..n).filter(|&u| b >> u & 1 == 0) {
            let gain_b = table[b | 1 << u] - table[b];
            // walk every submask of b
            let mut a = b;
            loop {
                let gain_a = table[a | 1 << u] - table[a];
                if gain_a < gain_b - tolerance(gain_a, gain_b) {
                    return Ok(false);
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
    }
    Ok(true)
}

/// Verifies `f(u | S) >= 0` for every `S` and `u`. Uncounted.
pub fn check_monotone(f: &ValueOracle) -> Result<bool> {
    let n = f.ground_size();
    let table = value_table(f.function().as_ref())?;
    for s in 0usize..1 << n {
        for u in (0..n).filter(|&u| s >> u & 1 == 0) {
            let gain = table[s | 1 << u] - table[s];
            if gain < -tolerance(table[s], table[s | 1 << u]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Random subset of `set` containing each element independently with probability `p`.
pub fn sample_correlated_subset<R: Rng + ?Sized>(set: &Subset, p: f64, rng: &mut R) -> Subset {
    assert!((0.0..=1.0).contains(&p), "inclusion probability {p} outside [0, 1]");
    // gen::<f64>() is in [0, 1), so p = 0 never includes and p = 1 always does
    Subset(set.iter().filter(|_| rng.gen::<f64>() < p).collect())
}
