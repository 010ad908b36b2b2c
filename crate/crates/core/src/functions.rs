//! Concrete submodular functions: weighted coverage, directed cut, facility location, modular
//! and explicit lookup tables.

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};

fn check_weights(what: &str, weights: &[f64]) -> Result<()> {
    match weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
        Some(i) => Err(Error::InvalidInput(format!(
            "{what} weight {i} is {} (must be finite and >= 0)",
            weights[i]
        ))),
        None => Ok(()),
    }
}

/// Weighted coverage: element `i` covers the universe items `sets[i]`, and `f(S)` is the total
/// weight of items covered by at least one member of `S`.
#[derive(Debug, Clone)]
pub struct Coverage {
    item_weights: Vec<f64>,
    unit_weights: bool,
    // one bitset over the universe per element
    covers: Vec<Vec<u64>>,
    words: usize,
}

impl Coverage {
    pub fn new(item_weights: Vec<f64>, sets: Vec<Vec<usize>>) -> Result<Self> {
        check_weights("item", &item_weights)?;
        let universe = item_weights.len();
        let words = universe.div_ceil(64);
        let mut covers = Vec::with_capacity(sets.len());
        for (i, items) in sets.iter().enumerate() {
            let mut bits = vec![0u64; words];
            for &item in items {
                if item >= universe {
                    return Err(Error::InvalidInput(format!(
                        "set {i} covers item {item} outside universe of size {universe}"
                    )));
                }
                bits[item / 64] |= 1 << (item % 64);
            }
            covers.push(bits);
        }
        let unit_weights = item_weights.iter().all(|&w| w == 1.0);
        Ok(Coverage {
            item_weights,
            unit_weights,
            covers,
            words,
        })
    }

    /// Coverage with every universe item worth 1.
    pub fn unit(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(vec![1.0; universe], sets)
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut union = vec![0u64; self.words];
        for &u in set {
            for (acc, w) in union.iter_mut().zip(&self.covers[u]) {
                *acc |= w;
            }
        }
        if self.unit_weights {
            return union.iter().map(|w| w.count_ones()).sum::<u32>() as f64;
        }
        let mut total = 0.0;
        for (wi, &word) in union.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                total += self.item_weights[wi * 64 + b];
                bits &= bits - 1;
            }
        }
        total
    }

    fn is_monotone(&self) -> bool {
        true
    }
}

/// Directed cut: `f(S)` is the total weight of arcs leaving `S`. Non-monotone.
#[derive(Debug, Clone)]
pub struct DirectedCut {
    vertices: usize,
    arcs: Vec<(usize, usize, f64)>,
}

impl DirectedCut {
    pub fn new(vertices: usize, arcs: Vec<(usize, usize, f64)>) -> Result<Self> {
        for (i, &(a, b, w)) in arcs.iter().enumerate() {
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidInput(format!(
                    "arc {i} ({a}->{b}) leaves the vertex range 0..{vertices}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidInput(format!("arc {i} has weight {w}")));
            }
        }
        Ok(DirectedCut { vertices, arcs })
    }
}

impl SetFunction for DirectedCut {
    fn ground_size(&self) -> usize {
        self.vertices
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut inside = vec![false; self.vertices];
        for &u in set {
            inside[u] = true;
        }
        self.arcs
            .iter()
            .filter(|&&(a, b, _)| inside[a] && !inside[b])
            .map(|&(_, _, w)| w)
            .sum()
    }

    fn is_monotone(&self) -> bool {
        false
    }
}

/// Facility location: `f(S) = Σ_c max_{j ∈ S} benefit[c][j]`, zero for the empty set.
/// The ground set is the set of facilities (columns).
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    facilities: usize,
    benefits: Vec<Vec<f64>>,
}

impl FacilityLocation {
    pub fn new(facilities: usize, benefits: Vec<Vec<f64>>) -> Result<Self> {
        for (c, row) in benefits.iter().enumerate() {
            if row.len() != facilities {
                return Err(Error::InvalidInput(format!(
                    "client {c} lists {} benefits, expected {facilities}",
                    row.len()
                )));
            }
            check_weights("benefit", row)?;
        }
        Ok(FacilityLocation { facilities, benefits })
    }
}

impl SetFunction for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.facilities
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        self.benefits
            .iter()
            .map(|row| set.iter().map(|&j| row[j]).fold(0.0, f64::max))
            .sum()
    }

    fn is_monotone(&self) -> bool {
        true
    }
}

/// `f(S) = Σ_{u ∈ S} weight[u]`.
#[derive(Debug, Clone)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights("element", &weights)?;
        Ok(Modular { weights })
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut seen = vec![false; self.weights.len()];
        let mut total = 0.0;
        for &u in set {
            if !std::mem::replace(&mut seen[u], true) {
                total += self.weights[u];
            }
        }
        total
    }

    fn is_monotone(&self) -> bool {
        true
    }
}

/// Explicit value table indexed by bitmask (`values[mask]`), for small test fixtures.
///
/// The table is not required to be submodular; [`crate::oracle::check_submodular`] tells.
#[derive(Debug, Clone)]
pub struct TableFunction {
    n: usize,
    values: Vec<f64>,
    monotone: bool,
}

pub const TABLE_MAX_ELEMENTS: usize = 16;

impl TableFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > TABLE_MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!(
                "tables support at most {TABLE_MAX_ELEMENTS} elements"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "table over {n} elements needs {} values, got {}",
                1 << n,
                values.len()
            )));
        }
        check_weights("table", &values)?;
        let monotone = (0..values.len()).all(|s| (0..n).all(|u| values[s | 1 << u] >= values[s]));
        Ok(TableFunction { n, values, monotone })
    }
}

impl SetFunction for TableFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mask = set.iter().fold(0usize, |m, &u| m | 1 << u);
        self.values[mask]
    }

    fn is_monotone(&self) -> bool {
        self.monotone
    }
}
