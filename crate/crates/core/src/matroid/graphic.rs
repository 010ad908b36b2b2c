use crate::error::{Error, Result};
use crate::oracle::ElementId;

use super::IndependenceSystem;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Cycle matroid of an undirected multigraph: element `i` is edge `edges[i]`, and a set is
/// independent iff its edges form a forest. A self-loop edge is never independent.
#[derive(Debug, Clone)]
pub struct Graphic {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graphic {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(i) = edges.iter().position(|&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::InvalidInput(format!(
                "edge {i} leaves the vertex range 0..{vertices}"
            )));
        }
        Ok(Graphic { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl IndependenceSystem for Graphic {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        set.iter().all(|&e| {
            let (a, b) = self.edges[e];
            uf.union(a, b)
        })
    }
}
