use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction, Subset, ValueOracle};

use super::{IndependenceSystem, Matroid};

#[derive(Debug)]
struct DummyValue {
    base: Arc<dyn SetFunction>,
    n_real: usize,
    dummies: usize,
}

impl SetFunction for DummyValue {
    fn ground_size(&self) -> usize {
        self.n_real + self.dummies
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let real: Vec<ElementId> = set.iter().copied().filter(|&u| u < self.n_real).collect();
        self.base.eval(&real)
    }

    fn is_monotone(&self) -> bool {
        self.base.is_monotone()
    }
}

#[derive(Debug)]
struct DummyIndependence {
    base: Arc<dyn IndependenceSystem>,
    n_real: usize,
    dummies: usize,
    cap: usize,
}

impl IndependenceSystem for DummyIndependence {
    fn ground_size(&self) -> usize {
        self.n_real + self.dummies
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        if set.len() > self.cap {
            return false;
        }
        let real: Vec<ElementId> = set.iter().copied().filter(|&u| u < self.n_real).collect();
        self.base.independent(&real)
    }
}

/// A problem whose ground set is extended by `dummies` zero-value elements with ids
/// `n_real..n_real + dummies`.
///
/// `f'(S) = f(S \ D)`. With a matroid, `S` is independent iff `S \ D` is independent and
/// `|S| <= cap`. Each augmented query is charged once to the base oracle's ledger, including
/// queries answered by the size cap alone.
#[derive(Debug, Clone)]
pub struct DummyAugmentedProblem {
    pub value: ValueOracle,
    pub matroid: Option<Matroid>,
    n_real: usize,
    dummies: usize,
}

impl DummyAugmentedProblem {
    /// Cardinality variant: no independence structure, the algorithm enforces its own bound.
    pub fn cardinality(f: &ValueOracle, dummies: usize) -> Result<Self> {
        if dummies == 0 {
            return Err(Error::InvalidInput("at least one dummy element is required".into()));
        }
        let n_real = f.ground_size();
        let value = DummyValue {
            base: Arc::clone(f.function()),
            n_real,
            dummies,
        };
        Ok(DummyAugmentedProblem {
            value: ValueOracle::new(value, Arc::clone(f.ledger())),
            matroid: None,
            n_real,
            dummies,
        })
    }

    pub fn n_real(&self) -> usize {
        self.n_real
    }

    pub fn dummies(&self) -> usize {
        self.dummies
    }

    pub fn is_dummy(&self, u: ElementId) -> bool {
        u >= self.n_real
    }

    /// Removes the dummy elements from a solution.
    pub fn strip(&self, set: &Subset) -> Subset {
        set.filtered(|u| u < self.n_real)
    }
}

/// Matroid variant: `cap` is the rank `k` of `m`, so that any independent set of real elements
/// can be padded with dummies up to a base of size `k`.
pub fn augment_with_dummies(f: &ValueOracle, m: &Matroid, dummies: usize, cap: usize) -> Result<DummyAugmentedProblem> {
    if f.ground_size() != m.ground_size() {
        return Err(Error::InvalidInput(format!(
            "objective has {} elements but the matroid has {}",
            f.ground_size(),
            m.ground_size()
        )));
    }
    let mut problem = DummyAugmentedProblem::cardinality(f, dummies)?;
    let system = DummyIndependence {
        base: Arc::clone(m.system()),
        n_real: problem.n_real,
        dummies,
        cap,
    };
    problem.matroid = Some(Matroid::new(system, Arc::clone(m.ledger())));
    Ok(problem)
}
