//! JSON formats for instances and matroids.
//!
//! Instance files are tagged by `kind`:
//!
//! ```json
//! {"kind": "coverage", "item_weights": [1.0, 2.0], "sets": [[0], [0, 1]]}
//! {"kind": "cut", "vertices": 3, "arcs": [[0, 1, 2.5], [1, 2, 1.0]]}
//! {"kind": "facility", "facilities": 2, "benefits": [[1.0, 0.5], [0.0, 3.0]]}
//! {"kind": "modular", "weights": [3.0, 1.0, 2.0]}
//! {"kind": "table", "n": 2, "values": [0.0, 1.0, 1.0, 1.5]}
//! ```
//!
//! Matroid files: `{"kind": "uniform", "k": 3}`,
//! `{"kind": "partition", "blocks": [[0, 1], [2, 3]], "capacities": [1, 1]}` or
//! `{"kind": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2]]}`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use submax::functions::{Coverage, DirectedCut, FacilityLocation, Modular, TableFunction};
use submax::{ElementId, Matroid, QueryLedger, SetFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceSpec {
    Coverage {
        item_weights: Vec<f64>,
        sets: Vec<Vec<usize>>,
    },
    Cut {
        vertices: usize,
        arcs: Vec<(usize, usize, f64)>,
    },
    Facility {
        facilities: usize,
        benefits: Vec<Vec<f64>>,
    },
    Modular {
        weights: Vec<f64>,
    },
    Table {
        n: usize,
        values: Vec<f64>,
    },
}

impl InstanceSpec {
    pub fn ground_size(&self) -> usize {
        match self {
            InstanceSpec::Coverage { sets, .. } => sets.len(),
            InstanceSpec::Cut { vertices, .. } => *vertices,
            InstanceSpec::Facility { facilities, .. } => *facilities,
            InstanceSpec::Modular { weights } => weights.len(),
            InstanceSpec::Table { n, .. } => *n,
        }
    }

    pub fn build(&self) -> anyhow::Result<Arc<dyn SetFunction>> {
        let f: Arc<dyn SetFunction> = match self.clone() {
            InstanceSpec::Coverage { item_weights, sets } => Arc::new(Coverage::new(item_weights, sets)?),
            InstanceSpec::Cut { vertices, arcs } => Arc::new(DirectedCut::new(vertices, arcs)?),
            InstanceSpec::Facility { facilities, benefits } => Arc::new(FacilityLocation::new(facilities, benefits)?),
            InstanceSpec::Modular { weights } => Arc::new(Modular::new(weights)?),
            InstanceSpec::Table { n, values } => Arc::new(TableFunction::new(n, values)?),
        };
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidSpec {
    Uniform {
        k: usize,
    },
    Partition {
        blocks: Vec<Vec<ElementId>>,
        capacities: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl MatroidSpec {
    /// Builds the matroid over a ground set of `n` elements.
    pub fn build(&self, n: usize, ledger: Arc<QueryLedger>) -> anyhow::Result<Matroid> {
        let m = match self.clone() {
            MatroidSpec::Uniform { k } => Matroid::uniform(n, k, ledger),
            MatroidSpec::Partition { blocks, capacities } => Matroid::partition(blocks, capacities, ledger)?,
            MatroidSpec::Graphic { vertices, edges } => Matroid::graphic(vertices, edges, ledger)?,
        };
        if m.ground_size() != n {
            bail!("matroid has {} elements but the instance has {n}", m.ground_size());
        }
        Ok(m)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
