//! Counted independence oracles.
//!
//! A [`Matroid`] is a shared, immutable [`IndependenceSystem`] plus the ledger it charges.
//! Contraction views and dummy-augmented matroids are themselves independence systems
//! wrapping the base structure, so a query against a view is charged exactly once.

mod dummy;
mod graphic;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{check_ids, Error, Result};
use crate::ledger::QueryLedger;
use crate::oracle::{ElementId, Subset};

pub use dummy::{augment_with_dummies, DummyAugmentedProblem};
pub use graphic::{Graphic, UnionFind};

/// Raw (uncounted) independence structure over `0..ground_size()`.
///
/// `independent` may assume its argument has no repeated elements.
pub trait IndependenceSystem: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;

    fn independent(&self, set: &[ElementId]) -> bool;

    /// Block structure, when this is a generalized partition matroid.
    fn partition(&self) -> Option<&Partition> {
        None
    }
}

/// `U(n, k)`: every set of at most `k` elements is independent.
#[derive(Debug, Clone)]
pub struct Uniform {
    n: usize,
    k: usize,
}

impl Uniform {
    pub fn new(n: usize, k: usize) -> Self {
        Uniform { n, k }
    }
}

impl IndependenceSystem for Uniform {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        set.len() <= self.k
    }
}

/// Generalized partition matroid: blocks `N_j` with capacities `k_j`. Every element belongs to
/// exactly one block.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<ElementId>>,
    capacities: Vec<usize>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<ElementId>>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::InvalidInput(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                capacities.len()
            )));
        }
        let n = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (j, block) in blocks.iter().enumerate() {
            for &u in block {
                if u >= n || block_of[u] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "blocks must partition 0..{n}; element {u} is out of range or repeated"
                    )));
                }
                block_of[u] = j;
            }
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(Partition {
            block_of,
            blocks,
            capacities,
        })
    }

    pub fn block_of(&self, u: ElementId) -> usize {
        self.block_of[u]
    }

    pub fn blocks(&self) -> &[Vec<ElementId>] {
        &self.blocks
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn rank(&self) -> usize {
        self.blocks
            .iter()
            .zip(&self.capacities)
            .map(|(b, &c)| b.len().min(c))
            .sum()
    }

    /// The partition matroid left after contracting the independent set `fixed`.
    pub fn contracted(&self, fixed: &[ElementId]) -> Partition {
        // contracted elements move to an extra block of capacity 0
        let loops = self.capacities.len();
        let mut block_of = self.block_of.clone();
        let mut capacities = self.capacities.clone();
        for &u in fixed {
            let j = self.block_of[u];
            capacities[j] = capacities[j].saturating_sub(1);
            block_of[u] = loops;
        }
        let mut blocks: Vec<Vec<ElementId>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&u| block_of[u] != loops).collect())
            .collect();
        blocks.push(fixed.to_vec());
        capacities.push(0);
        Partition {
            block_of,
            blocks,
            capacities,
        }
    }
}

impl IndependenceSystem for Partition {
    fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        let mut used = vec![0usize; self.capacities.len()];
        for &u in set {
            let j = self.block_of[u];
            used[j] += 1;
            if used[j] > self.capacities[j] {
                return false;
            }
        }
        true
    }

    fn partition(&self) -> Option<&Partition> {
        Some(self)
    }
}

/// Largest ground set an [`Explicit`] family may use.
pub const EXPLICIT_MAX_ELEMENTS: usize = 16;

/// An independence family listed set by set. Not required to be a matroid, which makes it
/// useful for exercising [`check_exchange_axiom`].
#[derive(Debug, Clone)]
pub struct Explicit {
    n: usize,
    family: HashSet<u32>,
}

impl Explicit {
    pub fn new(n: usize, sets: &[Vec<ElementId>]) -> Result<Self> {
        if n > EXPLICIT_MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!(
                "explicit families support at most {EXPLICIT_MAX_ELEMENTS} elements"
            )));
        }
        let mut family = HashSet::new();
        for s in sets {
            check_ids(s, n)?;
            family.insert(s.iter().fold(0u32, |m, &u| m | 1 << u));
        }
        if !family.contains(&0) {
            return Err(Error::InvalidInput("the empty set must be independent".into()));
        }
        Ok(Explicit { n, family })
    }
}

impl IndependenceSystem for Explicit {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        self.family.contains(&set.iter().fold(0u32, |m, &u| m | 1 << u))
    }
}

#[derive(Debug)]
struct Contraction {
    base: Arc<dyn IndependenceSystem>,
    fixed: Vec<ElementId>,
    partition: Option<Partition>,
}

impl IndependenceSystem for Contraction {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        // contracted elements are loops of the view
        if set.iter().any(|u| self.fixed.binary_search(u).is_ok()) {
            return false;
        }
        let mut all = Vec::with_capacity(self.fixed.len() + set.len());
        all.extend_from_slice(&self.fixed);
        all.extend_from_slice(set);
        self.base.independent(&all)
    }

    fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }
}

/// Handle to an independence oracle; every query is charged to the ledger.
#[derive(Clone)]
pub struct Matroid {
    system: Arc<dyn IndependenceSystem>,
    ledger: Arc<QueryLedger>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("system", &self.system)
            .field("ledger", &self.ledger.snapshot())
            .finish()
    }
}

impl Matroid {
    pub fn new<S: IndependenceSystem + 'static>(system: S, ledger: Arc<QueryLedger>) -> Self {
        Self::from_arc(Arc::new(system), ledger)
    }

    pub fn from_arc(system: Arc<dyn IndependenceSystem>, ledger: Arc<QueryLedger>) -> Self {
        Matroid { system, ledger }
    }

    pub fn uniform(n: usize, k: usize, ledger: Arc<QueryLedger>) -> Self {
        Self::new(Uniform::new(n, k), ledger)
    }

    pub fn partition(blocks: Vec<Vec<ElementId>>, capacities: Vec<usize>, ledger: Arc<QueryLedger>) -> Result<Self> {
        Ok(Self::new(Partition::new(blocks, capacities)?, ledger))
    }

    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>, ledger: Arc<QueryLedger>) -> Result<Self> {
        Ok(Self::new(Graphic::new(vertices, edges)?, ledger))
    }

    pub fn explicit(n: usize, sets: &[Vec<ElementId>], ledger: Arc<QueryLedger>) -> Result<Self> {
        Ok(Self::new(Explicit::new(n, sets)?, ledger))
    }

    pub fn ground_size(&self) -> usize {
        self.system.ground_size()
    }

    pub fn ledger(&self) -> &Arc<QueryLedger> {
        &self.ledger
    }

    pub fn system(&self) -> &Arc<dyn IndependenceSystem> {
        &self.system
    }

    pub fn with_ledger(&self, ledger: Arc<QueryLedger>) -> Self {
        Matroid {
            system: Arc::clone(&self.system),
            ledger,
        }
    }

    pub fn uncounted(&self) -> Self {
        self.with_ledger(Arc::new(QueryLedger::new()))
    }

    pub fn partition_structure(&self) -> Option<&Partition> {
        self.system.partition()
    }

    /// One independence query.
    pub fn is_independent(&self, set: &[ElementId]) -> Result<bool> {
        check_ids(set, self.ground_size())?;
        let distinct = Subset::new(set.iter().copied());
        Ok(self.independent(distinct.as_slice()))
    }

    /// Counted query without range checks or deduplication.
    pub(crate) fn independent(&self, set: &[ElementId]) -> bool {
        self.ledger.charge_independence();
        self.system.independent(set)
    }

    /// Counted `S + u` query reusing `scratch` as the buffer for `S`.
    pub(crate) fn independent_with(&self, scratch: &mut Vec<ElementId>, u: ElementId) -> bool {
        scratch.push(u);
        let ok = self.independent(scratch);
        scratch.pop();
        ok
    }

    /// The view `M / S`: `T` is independent iff `S ∪ T` is independent here. Members of `S` are
    /// loops of the view. Checking that `S` itself is independent costs one query.
    pub fn contract(&self, set: &[ElementId]) -> Result<Matroid> {
        if !self.is_independent(set)? {
            return Err(Error::InvalidInput(format!(
                "cannot contract dependent set {}",
                Subset::new(set.iter().copied())
            )));
        }
        let fixed = Subset::new(set.iter().copied()).into_vec();
        let partition = self.system.partition().map(|p| p.contracted(&fixed));
        let view = Contraction {
            base: Arc::clone(&self.system),
            fixed,
            partition,
        };
        Ok(Matroid::new(view, Arc::clone(&self.ledger)))
    }

    /// Greedy scan in id order; exactly `n` queries.
    pub fn greedy_basis(&self) -> Subset {
        let mut basis = Vec::new();
        for u in 0..self.ground_size() {
            if self.independent_with(&mut basis, u) {
                basis.push(u);
            }
        }
        Subset::new(basis)
    }

    pub fn rank(&self) -> usize {
        self.greedy_basis().len()
    }

    /// Rank of the elements in `candidates` by a greedy scan; `candidates.len()` queries.
    pub(crate) fn rank_of(&self, candidates: &[ElementId]) -> usize {
        let mut basis = Vec::new();
        for &u in candidates {
            if self.independent_with(&mut basis, u) {
                basis.push(u);
            }
        }
        basis.len()
    }
}

/// Elements whose singleton is independent; exactly `n` queries.
pub fn remove_self_loops(m: &Matroid) -> Vec<ElementId> {
    (0..m.ground_size()).filter(|&u| m.independent(&[u])).collect()
}

/// Largest ground set accepted by [`check_exchange_axiom`].
pub const EXCHANGE_CHECK_MAX_ELEMENTS: usize = 10;

/// Exhaustively checks that the family is a matroid (empty set, downward closure,
/// augmentation) and that every pair of bases `A`, `B` admits a bijection
/// `φ: B \ A → A \ B` with `A - φ(u) + u` independent for all `u`. Uncounted.
pub fn check_exchange_axiom(m: &Matroid) -> Result<bool> {
    let n = m.ground_size();
    if n > EXCHANGE_CHECK_MAX_ELEMENTS {
        return Err(Error::InvalidInput(format!(
            "exchange check supports at most {EXCHANGE_CHECK_MAX_ELEMENTS} elements, got {n}"
        )));
    }
    let system = m.system();
    let members = |mask: usize| (0..n).filter(move |&i| mask >> i & 1 == 1);
    let indep: Vec<bool> = (0..1usize << n)
        .map(|mask| system.independent(&members(mask).collect::<Vec<_>>()))
        .collect();
    if !indep[0] {
        return Ok(false);
    }
    let family: Vec<usize> = (0..1usize << n).filter(|&s| indep[s]).collect();
    for &s in &family {
        if members(s).any(|u| !indep[s & !(1 << u)]) {
            return Ok(false);
        }
    }
    for &a in &family {
        for &b in &family {
            if a.count_ones() < b.count_ones() && !members(b & !a).any(|x| indep[a | 1 << x]) {
                return Ok(false);
            }
        }
    }
    let bases: Vec<usize> = family
        .iter()
        .copied()
        .filter(|&s| (0..n).all(|u| s >> u & 1 == 1 || !indep[s | 1 << u]))
        .collect();
    for &a in &bases {
        for &b in &bases {
            let left: Vec<usize> = members(b & !a).collect();
            let right: Vec<usize> = members(a & !b).collect();
            if left.len() != right.len() {
                return Ok(false);
            }
            let adj: Vec<Vec<usize>> = left
                .iter()
                .map(|&u| {
                    (0..right.len())
                        .filter(|&r| indep[(a & !(1 << right[r])) | 1 << u])
                        .collect()
                })
                .collect();
            if max_bipartite_matching(&adj, right.len()) != left.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// Kuhn's augmenting-path matching.
fn max_bipartite_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[u] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[r] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len())
        .filter(|&u| augment(u, adj, &mut vec![false; right], &mut owner))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger() -> Arc<QueryLedger> {
        Arc::new(QueryLedger::new())
    }

    fn triangle() -> Matroid {
        Matroid::graphic(3, vec![(0, 1), (1, 2), (2, 0)], ledger()).unwrap()
    }

    #[test]
    fn uniform_caps_cardinality() {
        let m = Matroid::uniform(4, 2, ledger());
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert_eq!(m.ledger().independence_queries(), 2);
    }

    #[test]
    fn partition_caps_blocks() {
        let m = Matroid::partition(vec![vec![0, 1], vec![2, 3]], vec![1, 1], ledger()).unwrap();
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert!(!m.is_independent(&[0, 1]).unwrap());
    }

    #[test]
    fn partition_must_cover_ground_set_once() {
        assert!(Partition::new(vec![vec![0, 1], vec![1]], vec![1, 1]).is_err());
        assert!(Partition::new(vec![vec![0, 2]], vec![1]).is_err());
        assert!(Partition::new(vec![vec![0]], vec![1, 1]).is_err());
    }

    #[test]
    fn triangle_is_dependent() {
        let m = triangle();
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[0, 1]).unwrap());
    }

    #[test]
    fn out_of_range_is_an_error() {
        let m = Matroid::uniform(3, 2, ledger());
        assert_eq!(m.is_independent(&[3]), Err(Error::ElementOutOfRange { id: 3, n: 3 }));
    }

    #[test]
    fn contraction_delegates_one_query() {
        let m = Matroid::uniform(4, 3, ledger());
        let view = m.contract(&[0]).unwrap();
        let before = m.ledger().independence_queries();
        assert!(view.is_independent(&[1, 2]).unwrap());
        assert!(!view.is_independent(&[1, 2, 3]).unwrap());
        assert_eq!(m.ledger().independence_queries() - before, 2);
        assert_eq!(view.rank(), 2);
    }

    #[test]
    fn contraction_of_empty_set_is_identity() {
        let m = triangle();
        let view = m.contract(&[]).unwrap();
        for mask in 0u32..8 {
            let s: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
            assert_eq!(view.is_independent(&s).unwrap(), m.is_independent(&s).unwrap());
        }
    }

    #[test]
    fn contracted_triangle_edge() {
        let view = triangle().contract(&[0]).unwrap();
        assert!(!view.is_independent(&[1, 2]).unwrap());
        assert!(view.is_independent(&[1]).unwrap());
    }

    #[test]
    fn contracting_dependent_set_fails() {
        assert!(triangle().contract(&[0, 1, 2]).is_err());
    }

    #[test]
    fn contracted_partition_structure() {
        let m = Matroid::partition(vec![vec![0, 1, 2], vec![3, 4]], vec![2, 1], ledger()).unwrap();
        let view = m.contract(&[0, 3]).unwrap();
        let p = view.partition_structure().unwrap();
        assert_eq!(p.capacities(), &[1, 0, 0]);
        assert_eq!(p.blocks(), &[vec![1, 2], vec![4], vec![0, 3]]);
        for mask in 0u32..32 {
            let s: Vec<usize> = (0..5).filter(|&i| mask >> i & 1 == 1).collect();
            assert_eq!(p.independent(&s), view.system().independent(&s));
        }
    }

    #[test]
    fn ranks() {
        let m = Matroid::uniform(9, 5, ledger());
        assert_eq!(m.rank(), 5);
        assert_eq!(m.ledger().independence_queries(), 9);
        let p = Matroid::partition(vec![vec![0, 1, 2], vec![3, 4]], vec![2, 1], ledger()).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.partition_structure().unwrap().rank(), 3);
        // K4 has 6 edges, spanning tree of 3
        let k4 = Matroid::graphic(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], ledger()).unwrap();
        assert_eq!(k4.rank(), 3);
    }

    #[test]
    fn self_loops_are_removed() {
        assert_eq!(remove_self_loops(&Matroid::uniform(3, 1, ledger())), vec![0, 1, 2]);
        let e = Matroid::explicit(4, &[vec![], vec![0], vec![1], vec![2], vec![0, 1]], ledger()).unwrap();
        assert_eq!(remove_self_loops(&e), vec![0, 1, 2]);
        assert_eq!(e.ledger().independence_queries(), 4);
        let g = Matroid::graphic(2, vec![(0, 1), (1, 1)], ledger()).unwrap();
        assert_eq!(remove_self_loops(&g), vec![0]);
    }

    #[test]
    fn exchange_axiom_holds_for_matroids() {
        assert!(check_exchange_axiom(&Matroid::uniform(4, 2, ledger())).unwrap());
        assert!(check_exchange_axiom(&triangle()).unwrap());
        let p = Matroid::partition(vec![vec![0, 1, 2], vec![3, 4]], vec![2, 1], ledger()).unwrap();
        assert!(check_exchange_axiom(&p).unwrap());
    }

    #[test]
    fn exchange_axiom_fails_for_non_matroid() {
        let e = Matroid::explicit(3, &[vec![], vec![0], vec![1, 2]], ledger()).unwrap();
        assert!(!check_exchange_axiom(&e).unwrap());
    }
}
