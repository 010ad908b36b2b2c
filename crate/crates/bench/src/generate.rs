//! Deterministic random instances.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::schema::{InstanceSpec, MatroidSpec};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Coverage,
    Cut,
    Facility,
    Modular,
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coverage" => Ok(Family::Coverage),
            "cut" => Ok(Family::Cut),
            "facility" => Ok(Family::Facility),
            "modular" => Ok(Family::Modular),
            other => Err(GenerateError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidFamily {
    Uniform,
    Partition,
    Graphic,
}

impl FromStr for MatroidFamily {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(MatroidFamily::Uniform),
            "partition" => Ok(MatroidFamily::Partition),
            "graphic" => Ok(MatroidFamily::Graphic),
            other => Err(GenerateError::UnknownFamily(other.to_string())),
        }
    }
}

/// Size and shape knobs. `density` is the per-item inclusion probability for coverage, the arc
/// probability for cut and the fraction of clients a facility serves for facility location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub density: f64,
    /// Coverage universe size (defaults to `3n`) or facility client count (defaults to `2n`).
    pub width: Option<usize>,
    pub seed: u64,
}

pub fn generate_instance(family: Family, spec: GenSpec) -> Result<InstanceSpec, GenerateError> {
    if spec.n == 0 {
        return Err(GenerateError::Invalid("n must be positive".into()));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(GenerateError::Invalid(format!(
            "density {} must lie in (0, 1]",
            spec.density
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    Ok(match family {
        Family::Coverage => {
            let universe = spec.width.unwrap_or(3 * n);
            let sets = (0..n)
                .map(|_| {
                    let mut s: Vec<usize> = (0..universe).filter(|_| rng.gen::<f64>() < spec.density).collect();
                    if s.is_empty() {
                        s.push(rng.gen_range(0..universe));
                    }
                    s
                })
                .collect();
            let item_weights = (0..universe).map(|_| rng.gen_range(1..=4) as f64).collect();
            InstanceSpec::Coverage { item_weights, sets }
        }
        Family::Cut => {
            let mut arcs = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a != b && rng.gen::<f64>() < spec.density {
                        arcs.push((a, b, rng.gen_range(1..=9) as f64));
                    }
                }
            }
            InstanceSpec::Cut { vertices: n, arcs }
        }
        Family::Facility => {
            let clients = spec.width.unwrap_or(2 * n);
            let benefits = (0..clients)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.gen::<f64>() < spec.density {
                                rng.gen_range(1..=20) as f64
                            } else {
                                0.0
                            }
                        })
                        .collect()
                })
                .collect();
            InstanceSpec::Facility {
                facilities: n,
                benefits,
            }
        }
        Family::Modular => InstanceSpec::Modular {
            weights: (0..n).map(|_| rng.gen_range(1..=100) as f64).collect(),
        },
    })
}

/// A matroid of rank `k` on `n` elements. Partition matroids use `blocks` blocks of near-equal
/// size (elements dealt round-robin after a seeded shuffle) with capacities summing to `k`.
/// Graphic matroids are random connected multigraphs on `k + 1` vertices with `n` edges.
pub fn generate_matroid(
    family: MatroidFamily,
    n: usize,
    k: usize,
    blocks: usize,
    seed: u64,
) -> Result<MatroidSpec, GenerateError> {
    if k > n {
        return Err(GenerateError::Invalid(format!("rank {k} exceeds {n} elements")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x006d_6174_726f_6964);
    Ok(match family {
        MatroidFamily::Uniform => MatroidSpec::Uniform { k },
        MatroidFamily::Partition => {
            if blocks == 0 || blocks > k.max(1) || blocks > n {
                return Err(GenerateError::Invalid(format!(
                    "{blocks} blocks for rank {k} and {n} elements"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut parts = vec![Vec::new(); blocks];
            for (i, u) in order.into_iter().enumerate() {
                parts[i % blocks].push(u);
            }
            for p in &mut parts {
                p.sort_unstable();
            }
            let capacities = (0..blocks).map(|j| k / blocks + usize::from(j < k % blocks)).collect();
            MatroidSpec::Partition {
                blocks: parts,
                capacities,
            }
        }
        MatroidFamily::Graphic => {
            if n < k {
                return Err(GenerateError::Invalid("a spanning tree needs k edges".into()));
            }
            let vertices = k + 1;
            // random spanning tree first, then arbitrary extra edges
            let mut edges: Vec<(usize, usize)> = (1..vertices).map(|v| (rng.gen_range(0..v), v)).collect();
            while edges.len() < n {
                let a = rng.gen_range(0..vertices);
                let b = rng.gen_range(0..vertices);
                if a != b || vertices == 1 {
                    edges.push((a.min(b), a.max(b)));
                }
            }
            edges.shuffle(&mut rng);
            MatroidSpec::Graphic { vertices, edges }
        }
    })
}
