use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::LedgerSnapshot;
use crate::oracle::{ElementId, Subset, ValueOracle};

use super::Pick;

/// One element entering the pool: its marginal at insertion and the threshold `w` in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Insertion {
    pub element: ElementId,
    pub gain: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LazyCardinalityOutcome {
    pub solution: Subset,
    pub picks: Vec<Pick>,
    /// `|M|` each time the filler hands back control.
    pub pool_sizes: Vec<usize>,
    pub insertions: Vec<Insertion>,
    /// Iterations of the improved variant that rejected `u'_i` and refilled.
    pub rescans: usize,
    pub queries: LedgerSnapshot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Real(ElementId),
    Dummy(usize),
}

/// Running solution plus the candidate pool `M`.
struct Pool<'a> {
    f: &'a ValueOracle,
    k: usize,
    delta: f64,
    solution: Vec<ElementId>,
    in_solution: Vec<bool>,
    value: f64,
    members: Vec<Slot>,
    in_pool: Vec<bool>,
    dummy_used: Vec<bool>,
    pool_sizes: Vec<usize>,
    insertions: Vec<Insertion>,
}

impl<'a> Pool<'a> {
    fn gain(&mut self, u: ElementId) -> f64 {
        self.f.value_with(&mut self.solution, u) - self.value
    }

    fn add(&mut self, slot: Slot) -> Pick {
        match slot {
            Slot::Dummy(d) => {
                self.dummy_used[d] = true;
                Pick::Dummy
            }
            Slot::Real(u) if self.in_solution[u] => Pick::None,
            Slot::Real(u) => {
                self.solution.push(u);
                self.in_solution[u] = true;
                self.value = self.f.value(&self.solution);
                Pick::Real(u)
            }
        }
    }

    fn remove_at(&mut self, i: usize) {
        if let Slot::Real(u) = self.members.swap_remove(i) {
            self.in_pool[u] = false;
        }
    }

    /// Drops members with `f(u | S) <= w(1 - δ)`; dummies and members of `S` count as marginal 0.
    fn prune(&mut self, w: f64, keep_dummies: bool, known: Option<(ElementId, f64)>) {
        let cut = w * (1.0 - self.delta);
        let mut i = 0;
        while i < self.members.len() {
            let low = match self.members[i] {
                Slot::Dummy(_) => !keep_dummies && 0.0 <= cut,
                Slot::Real(u) if self.in_solution[u] => 0.0 <= cut,
                Slot::Real(u) => {
                    let g = match known {
                        Some((v, g)) if v == u => g,
                        _ => self.gain(u),
                    };
                    g <= cut
                }
            };
            if low {
                self.remove_at(i);
            } else {
                i += 1;
            }
        }
    }
}

/// The resumable threshold sweep that tops `M` up to `k` members.
struct Filler {
    weights: Vec<f64>,
    tail: f64,
    level: usize,
    pos: usize,
}

impl Filler {
    fn new(top: f64, k: usize, delta: f64) -> Self {
        let floor = delta * top / k as f64;
        let mut weights = Vec::new();
        let mut w = top;
        while w > floor {
            weights.push(w);
            w *= 1.0 - delta;
        }
        Filler {
            weights,
            tail: w,
            level: 0,
            pos: 0,
        }
    }

    /// Current `w`; once the sweep is exhausted, the value that ended it.
    fn w(&self) -> f64 {
        self.weights.get(self.level).copied().unwrap_or(self.tail)
    }

    /// Resumes from the stored `(level, pos)`; returns the slots it added.
    fn fill(&mut self, pool: &mut Pool<'_>) -> Vec<Slot> {
        let mut added = Vec::new();
        let n = pool.in_pool.len();
        while pool.members.len() < pool.k && self.level < self.weights.len() {
            let w = self.weights[self.level];
            while self.pos < n && pool.members.len() < pool.k {
                let u = self.pos;
                self.pos += 1;
                if pool.in_solution[u] || pool.in_pool[u] {
                    continue;
                }
                let gain = pool.gain(u);
                if gain > w * (1.0 - pool.delta) {
                    pool.members.push(Slot::Real(u));
                    pool.in_pool[u] = true;
                    pool.insertions.push(Insertion {
                        element: u,
                        gain,
                        threshold: w,
                    });
                    added.push(Slot::Real(u));
                }
            }
            if self.pos == n {
                self.level += 1;
                self.pos = 0;
            }
        }
        let mut d = 0;
        while pool.members.len() < pool.k {
            if !pool.dummy_used[d] && !pool.members.contains(&Slot::Dummy(d)) {
                pool.members.push(Slot::Dummy(d));
                added.push(Slot::Dummy(d));
            }
            d += 1;
        }
        pool.pool_sizes.push(pool.members.len());
        added
    }
}

fn setup<'a>(f: &'a ValueOracle, k: usize, delta: f64) -> Result<(Pool<'a>, Filler)> {
    if !(delta > 0.0 && delta < (-1.0f64).exp()) {
        return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1/e)")));
    }
    let n = f.ground_size();
    let mut pool = Pool {
        f,
        k,
        delta,
        solution: Vec::with_capacity(k),
        in_solution: vec![false; n],
        value: f.value(&[]),
        members: Vec::with_capacity(k),
        in_pool: vec![false; n],
        dummy_used: vec![false; 2 * k],
        pool_sizes: Vec::new(),
        insertions: Vec::new(),
    };
    let mut top = 0.0f64;
    for u in 0..n {
        top = top.max(pool.gain(u));
    }
    Ok((pool, Filler::new(top, k.max(1), delta)))
}

fn finish(pool: Pool<'_>, picks: Vec<Pick>, rescans: usize, start: &LedgerSnapshot) -> LazyCardinalityOutcome {
    LazyCardinalityOutcome {
        solution: Subset::new(pool.solution),
        picks,
        pool_sizes: pool.pool_sizes,
        insertions: pool.insertions,
        rescans,
        queries: pool.f.ledger().snapshot().since(start),
    }
}

/// Lazy greedy (simple): each iteration tops `M` up to `k` elements by a resumable sweep
/// `w = W, W(1-δ), ...` (while `w > δW/k`, then `2k` zero-value dummies), adds a uniform member of
/// `M` to `S`, and evicts members with `f(u | S) <= w(1 - δ)`.
pub fn lazy_greedy_simple<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    delta: f64,
    rng: &mut R,
) -> Result<LazyCardinalityOutcome> {
    let start = f.ledger().snapshot();
    let (mut pool, mut filler) = setup(f, k, delta)?;
    let mut picks = Vec::with_capacity(k);
    for _ in 0..k {
        filler.fill(&mut pool);
        let slot = pool.members[rng.gen_range(0..pool.members.len())];
        picks.push(pool.add(slot));
        pool.prune(filler.w(), false, None);
    }
    Ok(finish(pool, picks, 0, &start))
}

/// Lazy greedy (improved): `u'` drawn uniformly from `M` is taken if it is a dummy or still has
/// `f(u' | S) > (1 - δ)w`. Otherwise the stale members are evicted, `M` is refilled, and the
/// pick is uniform over the newly added elements. Each element joins `S` in a given iteration
/// with probability at most `1/k`.
pub fn lazy_greedy_improved<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    delta: f64,
    rng: &mut R,
) -> Result<LazyCardinalityOutcome> {
    let start = f.ledger().snapshot();
    let (mut pool, mut filler) = setup(f, k, delta)?;
    let mut picks = Vec::with_capacity(k);
    let mut rescans = 0;
    if k > 0 {
        filler.fill(&mut pool);
    }
    for _ in 0..k {
        let i = rng.gen_range(0..pool.members.len());
        let candidate = pool.members[i];
        let w = filler.w();
        let accepted = match candidate {
            Slot::Dummy(_) => Ok(candidate),
            Slot::Real(u) if pool.in_solution[u] => Err(Some((u, 0.0))),
            Slot::Real(u) => {
                let g = pool.gain(u);
                if g > (1.0 - delta) * w {
                    Ok(candidate)
                } else {
                    Err(Some((u, g)))
                }
            }
        };
        let chosen = match accepted {
            Ok(slot) => slot,
            Err(known) => {
                rescans += 1;
                pool.prune(w, true, known);
                let fresh = filler.fill(&mut pool);
                fresh[rng.gen_range(0..fresh.len())]
            }
        };
        picks.push(pool.add(chosen));
    }
    Ok(finish(pool, picks, rescans, &start))
}
