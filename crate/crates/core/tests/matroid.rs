mod common;

use common::*;
use proptest::prelude::*;
use submax::matroid::{augment_with_dummies, check_exchange_axiom, remove_self_loops, DummyAugmentedProblem};
use submax::{ElementId, Matroid, Subset};

/// Acyclicity by depth-first search, independent of the union-find inside the library.
fn forest(vertices: usize, edges: &[(usize, usize)], chosen: &[ElementId]) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    for &e in chosen {
        let (a, b) = edges[e];
        if a == b {
            return false;
        }
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut seen = vec![false; vertices];
    for root in 0..vertices {
        if seen[root] {
            continue;
        }
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, via)) = stack.pop() {
            if seen[v] {
                return false;
            }
            seen[v] = true;
            for &(w, e) in &adj[v] {
                if e != via {
                    stack.push((w, e));
                }
            }
        }
    }
    true
}

fn zoo_matroids() -> Vec<(&'static str, Matroid)> {
    let l = ledger();
    vec![
        ("uniform", Matroid::uniform(8, 3, l.clone())),
        (
            "partition",
            Matroid::partition(vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]], vec![1, 2, 2], l.clone()).unwrap(),
        ),
        (
            "graphic",
            Matroid::graphic(
                5,
                vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 0), (1, 3), (4, 4)],
                l,
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn independence_examples() {
    let l = ledger();
    let u = Matroid::uniform(5, 2, l.clone());
    assert!(!u.is_independent(&[0, 1, 2]).unwrap());
    let p = Matroid::partition(vec![vec![0, 1], vec![2, 3]], vec![1, 1], l.clone()).unwrap();
    assert!(p.is_independent(&[0, 2]).unwrap());
    assert!(!p.is_independent(&[0, 1]).unwrap());
    let g = Matroid::graphic(3, vec![(0, 1), (1, 2), (2, 0)], l.clone()).unwrap();
    assert!(!g.is_independent(&[0, 1, 2]).unwrap());
    assert!(g.is_independent(&[0, 1]).unwrap());
    assert_eq!(l.independence_queries(), 5);
    assert!(u.is_independent(&[7]).is_err());
}

#[test]
fn contraction_examples() {
    let u = Matroid::uniform(5, 3, ledger());
    let v = u.contract(&[0]).unwrap();
    assert!(v.is_independent(&[1, 2]).unwrap());
    assert!(!v.is_independent(&[1, 2, 3]).unwrap());
    let id = u.contract(&[]).unwrap();
    for s in 0usize..32 {
        let set = members(s, 5);
        assert_eq!(id.is_independent(&set).unwrap(), u.is_independent(&set).unwrap());
    }
    let g = Matroid::graphic(3, vec![(0, 1), (1, 2), (2, 0)], ledger()).unwrap();
    let gv = g.contract(&[0]).unwrap();
    assert!(!gv.is_independent(&[1, 2]).unwrap());
    assert!(gv.is_independent(&[1]).unwrap());
    assert_eq!(gv.rank(), 1);
    assert!(u.uncounted().contract(&[0, 1, 2, 3]).is_err());
}

#[test]
fn contracted_query_costs_one_base_query() {
    let l = ledger();
    let u = Matroid::uniform(6, 4, l.clone());
    let v = u.contract(&[0, 1]).unwrap();
    let before = l.independence_queries();
    v.is_independent(&[2, 3]).unwrap();
    assert_eq!(l.independence_queries(), before + 1);
}

#[test]
fn rank_and_basis() {
    let l = ledger();
    let u = Matroid::uniform(9, 5, l.clone());
    assert_eq!(u.rank(), 5);
    let p = Matroid::partition(vec![vec![0, 1], vec![2, 3]], vec![2, 1], l.clone()).unwrap();
    assert_eq!(p.rank(), 3);
    // wheel on 6 vertices: connected
    let mut edges: Vec<(usize, usize)> = (1..6).map(|i| (0, i)).collect();
    edges.extend((1..6).map(|i| (i, i % 5 + 1)));
    let g = Matroid::graphic(6, edges.clone(), l.clone()).unwrap();
    let before = l.independence_queries();
    let basis = g.greedy_basis();
    assert_eq!(l.independence_queries() - before, edges.len() as u64);
    assert_eq!(basis.len(), 5);
    assert!(forest(6, &edges, basis.as_slice()));
}

#[test]
fn self_loops_removed() {
    let u = Matroid::uniform(4, 2, ledger());
    assert_eq!(remove_self_loops(&u), vec![0, 1, 2, 3]);
    let e = Matroid::explicit(
        4,
        &[vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]],
        ledger(),
    )
    .unwrap();
    assert_eq!(remove_self_loops(&e), vec![0, 1, 2]);
    let g = Matroid::graphic(3, vec![(0, 1), (2, 2), (1, 2)], ledger()).unwrap();
    assert_eq!(remove_self_loops(&g), vec![0, 2]);
}

#[test]
fn exchange_axiom() {
    for (name, m) in zoo_matroids() {
        assert!(check_exchange_axiom(&m).unwrap(), "{name}");
    }
    let bad = Matroid::explicit(3, &[vec![], vec![0], vec![1], vec![2], vec![1, 2]], ledger()).unwrap();
    assert!(!check_exchange_axiom(&bad).unwrap());
    let two = Matroid::uniform(4, 2, ledger());
    assert!(check_exchange_axiom(&two).unwrap());
}

/// Downward closure and augmentation written directly over masks.
#[test]
fn zoo_matroids_satisfy_axioms() {
    for (name, m) in zoo_matroids() {
        let m = m.uncounted();
        let n = m.ground_size();
        let ind: Vec<bool> = (0usize..1 << n)
            .map(|s| m.is_independent(&members(s, n)).unwrap())
            .collect();
        assert!(ind[0]);
        for s in 0usize..1 << n {
            if !ind[s] {
                continue;
            }
            for u in 0..n {
                assert!(ind[s & !(1 << u)], "{name}: closure");
            }
            for t in 0usize..1 << n {
                if ind[t] && t.count_ones() > s.count_ones() {
                    assert!(
                        (0..n).any(|u| t >> u & 1 == 1 && s >> u & 1 == 0 && ind[s | 1 << u]),
                        "{name}: augmentation"
                    );
                }
            }
        }
    }
}

#[test]
fn graphic_agrees_with_dfs() {
    let edges = vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 0), (1, 3), (4, 4)];
    let g = Matroid::graphic(5, edges.clone(), ledger()).unwrap();
    for s in 0usize..1 << edges.len() {
        let set = members(s, edges.len());
        assert_eq!(g.is_independent(&set).unwrap(), forest(5, &edges, &set), "{set:?}");
    }
}

#[test]
fn dummy_examples() {
    let f = oracle(random_coverage(4, 10, 0.3, 2));
    let m = Matroid::uniform(4, 3, ledger());
    let aug = augment_with_dummies(&f, &m, 3, 3).unwrap();
    assert_eq!(aug.value.evaluate(&[4, 5, 6]).unwrap(), 0.0);
    let am = aug.matroid.as_ref().unwrap();
    assert!(!am.is_independent(&[0, 1, 4, 5]).unwrap());
    assert!(am.is_independent(&[0, 1, 4]).unwrap());
    let s = Subset::new([0, 2, 5]);
    let stripped = aug.strip(&s);
    assert_eq!(stripped, Subset::new([0, 2]));
    assert_eq!(
        aug.value.evaluate(s.as_slice()).unwrap(),
        f.evaluate(stripped.as_slice()).unwrap()
    );
}

#[test]
fn dummy_queries_always_charged_once() {
    let l = ledger();
    let f = submax::ValueOracle::new(random_coverage(4, 10, 0.3, 2), l.clone());
    let m = Matroid::uniform(4, 2, l.clone());
    let aug = augment_with_dummies(&f, &m, 4, 2).unwrap();
    let am = aug.matroid.unwrap();
    for set in [vec![4usize, 5, 6], vec![0, 4], vec![0, 1, 2], vec![]] {
        let before = l.independence_queries();
        am.is_independent(&set).unwrap();
        assert_eq!(l.independence_queries(), before + 1, "{set:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn contraction_consistency(which in 0usize..3, s in 0usize..256, t in 0usize..256) {
        let (_, m) = zoo_matroids().swap_remove(which);
        let m = m.uncounted();
        let s = members(s, 8);
        prop_assume!(m.is_independent(&s).unwrap());
        let view = m.contract(&s).unwrap();
        let t = members(t, 8);
        let joint: Vec<usize> = s.iter().chain(&t).copied().collect();
        prop_assert_eq!(view.is_independent(&t).unwrap(), m.is_independent(&joint).unwrap() && t.iter().all(|u| !s.contains(u)));
    }

    #[test]
    fn dummy_transparency(seed in 0u64..50, mask in 0usize..(1 << 12)) {
        let f = oracle(random_facility(8, 12, seed));
        let aug = DummyAugmentedProblem::cardinality(&f, 4).unwrap();
        let set = members(mask, 12);
        let real: Vec<usize> = set.iter().copied().filter(|&u| u < 8).collect();
        prop_assert_eq!(aug.value.evaluate(&set).unwrap(), f.evaluate(&real).unwrap());
        prop_assert!(set.iter().all(|&u| aug.is_dummy(u) == (u >= 8)));
    }
}
