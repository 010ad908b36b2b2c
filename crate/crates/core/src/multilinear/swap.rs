use rand::Rng;

use crate::error::{Error, Result};
use crate::matroid::{IndependenceSystem, Matroid, Partition};
use crate::oracle::{ElementId, Subset};

use super::FractionalPoint;

/// Rounds `x` to one of its bases' neighbours by repeatedly merging two weighted bases: an
/// exchange pair `(i, j)` is resolved towards `i` with probability `w1 / (w1 + w2)`.
///
/// Uses no value queries. On a partition matroid the exchange pairs are read off block by block
/// without independence queries; otherwise each exchange is found with independence queries.
/// All bases must be independent and of equal size.
pub fn swap_round<R: Rng + ?Sized>(m: &Matroid, x: &FractionalPoint, rng: &mut R) -> Result<Subset> {
    let terms = x.decomposition();
    if terms.is_empty() {
        return Err(Error::InvalidInput("cannot round an empty decomposition".into()));
    }
    if x.ground_size() != m.ground_size() {
        return Err(Error::InvalidInput(
            "point and matroid have different ground sets".into(),
        ));
    }
    let size = terms[0].base.len();
    if terms.iter().any(|t| t.base.len() != size) {
        return Err(Error::InvalidInput(
            "bases must have equal size; complete them first".into(),
        ));
    }
    match m.partition_structure() {
        Some(p) => round_partition(p, x, rng),
        None => round_general(m, x, rng),
    }
}

pub(crate) fn round_general<R: Rng + ?Sized>(m: &Matroid, x: &FractionalPoint, rng: &mut R) -> Result<Subset> {
    let terms = x.decomposition();
    for t in terms {
        if !m.independent(t.base.as_slice()) {
            return Err(Error::InvalidInput(format!("base {} is dependent", t.base)));
        }
    }
    let mut merged = terms[0].base.clone();
    let mut merged_weight = terms[0].weight;
    for t in &terms[1..] {
        let mut b1 = merged;
        let mut b2 = t.base.clone();
        loop {
            let Some(i) = b1.iter().find(|&u| !b2.contains(u)) else {
                break;
            };
            let j = b2
                .iter()
                .filter(|&v| !b1.contains(v))
                .find(|&v| {
                    let mut b1x = b1.clone();
                    b1x.remove(i);
                    b1x.insert(v);
                    let mut b2x = b2.clone();
                    b2x.remove(v);
                    b2x.insert(i);
                    m.independent(b1x.as_slice()) && m.independent(b2x.as_slice())
                })
                .ok_or_else(|| Error::InvalidInput(format!("no exchange partner for {i}; not a matroid")))?;
            if rng.gen::<f64>() < merged_weight / (merged_weight + t.weight) {
                b2.remove(j);
                b2.insert(i);
            } else {
                b1.remove(i);
                b1.insert(j);
            }
        }
        merged = b1;
        merged_weight += t.weight;
    }
    Ok(merged)
}

fn round_partition<R: Rng + ?Sized>(p: &Partition, x: &FractionalPoint, rng: &mut R) -> Result<Subset> {
    let terms = x.decomposition();
    let blocks = p.capacities().len();
    let per_block = |base: &Subset| {
        let mut members: Vec<Vec<ElementId>> = vec![Vec::new(); blocks];
        for u in base.iter() {
            members[p.block_of(u)].push(u);
        }
        members
    };
    let mut merged = per_block(&terms[0].base);
    for t in terms {
        if !p.independent(t.base.as_slice()) {
            return Err(Error::InvalidInput(format!("base {} is dependent", t.base)));
        }
    }
    let mut merged_weight = terms[0].weight;
    for t in &terms[1..] {
        let other = per_block(&t.base);
        let keep_merged = merged_weight / (merged_weight + t.weight);
        for (mine, theirs) in merged.iter_mut().zip(&other) {
            if mine.len() != theirs.len() {
                return Err(Error::InvalidInput(
                    "bases differ in block sizes; complete them first".into(),
                ));
            }
            let only_theirs: Vec<ElementId> = theirs.iter().copied().filter(|v| !mine.contains(v)).collect();
            let mut next = only_theirs.iter();
            for slot in mine.iter_mut() {
                if theirs.contains(slot) {
                    continue;
                }
                let j = *next.next().expect("block sizes match");
                if rng.gen::<f64>() >= keep_merged {
                    *slot = j;
                }
            }
        }
        merged_weight += t.weight;
    }
    Ok(merged.into_iter().flatten().collect())
}
