mod common;

use std::sync::atomic::Ordering;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use submax::algos::{combined_algorithm, thresholding_greedy, CombinedParams};
use submax::cardinality::{lazy_greedy_improved, random_sampling, standard_greedy};
use submax::functions::{Coverage, DirectedCut, Modular, TableFunction};
use submax::oracle::{check_monotone, check_submodular, sample_correlated_subset};
use submax::{Matroid, SetFunction, Subset};

fn four_sets() -> Coverage {
    Coverage::unit(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3]]).unwrap()
}

/// Independent submodularity check: every pair `A ⊆ B`, `u ∉ B`, written directly on masks.
fn submodular_by_pairs(f: &dyn SetFunction) -> bool {
    let n = f.ground_size();
    let v: Vec<f64> = (0usize..1 << n).map(|m| f.eval(&members(m, n))).collect();
    for b in 0usize..1 << n {
        for a in 0usize..1 << n {
            if a & !b != 0 {
                continue;
            }
            for u in 0..n {
                if b >> u & 1 == 1 {
                    continue;
                }
                let ga = v[a | 1 << u] - v[a];
                let gb = v[b | 1 << u] - v[b];
                if ga < gb - 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn coverage_examples() {
    let f = oracle(four_sets());
    assert_eq!(f.evaluate(&[0, 2]).unwrap(), 4.0);
    assert_eq!(f.evaluate(&[0, 1, 2, 3]).unwrap(), 4.0);
    assert_eq!(f.marginal(1, &[0], None).unwrap(), 1.0);
    assert_eq!(f.ledger().value_queries(), 4);
    assert_eq!(f.marginal(1, &[0], Some(2.0)).unwrap(), 1.0);
    assert_eq!(f.ledger().value_queries(), 5);
}

#[test]
fn modular_and_cut_examples() {
    let f = oracle(Modular::new(vec![3.0, 1.0, 2.0]).unwrap());
    assert_eq!(f.evaluate(&[0, 2]).unwrap(), 5.0);
    assert_eq!(f.marginal(1, &[0], None).unwrap(), 1.0);
    assert_eq!(f.marginal(0, &[0, 2], None).unwrap(), 0.0);
    let g = oracle(Modular::new(vec![1.0, 1.0]).unwrap());
    assert_eq!(g.evaluate(&[0, 1]).unwrap(), 2.0);
    let cut = oracle(DirectedCut::new(2, vec![(0, 1, 5.0)]).unwrap());
    assert_eq!(cut.evaluate(&[0]).unwrap(), 5.0);
    assert_eq!(cut.evaluate(&[0, 1]).unwrap(), 0.0);
}

#[test]
fn out_of_range_and_negative_weights_rejected() {
    let f = oracle(four_sets());
    assert!(f.evaluate(&[4]).is_err());
    assert!(Modular::new(vec![1.0, -1.0]).is_err());
    assert!(DirectedCut::new(2, vec![(0, 1, -2.0)]).is_err());
}

#[test]
fn empty_set_is_zero_for_the_zoo() {
    for (name, f) in zoo(10, 11) {
        assert_eq!(f.eval(&[]), 0.0, "{name}");
    }
}

#[test]
fn structural_checks_on_examples() {
    let cov = oracle(four_sets());
    assert!(check_submodular(&cov).unwrap() && check_monotone(&cov).unwrap());
    let cut = oracle(random_cut(8, 20, 3));
    assert!(check_submodular(&cut).unwrap());
    assert!(!check_monotone(&cut).unwrap());
    let table = oracle(TableFunction::new(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap());
    assert!(!check_submodular(&table).unwrap());
}

#[test]
fn zoo_is_submodular_exhaustively() {
    for seed in 0..3 {
        for (name, f) in zoo(10, 100 + seed) {
            assert!(submodular_by_pairs(f.as_ref()), "{name} seed {seed}");
            let o = submax::ValueOracle::from_arc(Arc::clone(&f), ledger());
            assert!(check_submodular(&o).unwrap(), "{name} seed {seed}");
            assert_eq!(check_monotone(&o).unwrap(), name != "cut", "{name}");
        }
    }
}

#[test]
fn correlated_subset_edges_and_frequencies() {
    let a = Subset::new([0, 1, 2]);
    let mut r = rng(5);
    for _ in 0..100 {
        assert!(sample_correlated_subset(&a, 0.0, &mut r).is_empty());
        assert_eq!(sample_correlated_subset(&a, 1.0, &mut r), a);
    }
    let draws = 100_000;
    let mut hits = [0usize; 3];
    for _ in 0..draws {
        for u in sample_correlated_subset(&a, 0.5, &mut r).iter() {
            hits[u] += 1;
        }
    }
    for h in hits {
        assert!((h as f64 / draws as f64 - 0.5).abs() < 0.01, "{h}");
    }
}

/// `E f(A(p)) >= (1-p) f(∅) + p f(A)` and `E f(A(p)) >= (1-p) f(∅)`, each within 3 standard errors.
#[test]
fn random_subset_lower_bounds() {
    let n = 10;
    let draws = 10_000;
    for (name, f) in zoo(n, 21) {
        let o = submax::ValueOracle::from_arc(f, ledger());
        let mut r = rng(17);
        for a_mask in [0b11_1111_1111usize, 0b10_1010_1010, 0b00_0011_0111] {
            let a = Subset::new(members(a_mask, n));
            let fa = o.evaluate(a.as_slice()).unwrap();
            let f0 = o.evaluate(&[]).unwrap();
            for p in [0.25, 0.5, 0.75] {
                let xs: Vec<f64> = (0..draws)
                    .map(|_| o.evaluate(sample_correlated_subset(&a, p, &mut r).as_slice()).unwrap())
                    .collect();
                let (mean, se) = mean_se(&xs);
                assert!(
                    mean >= (1.0 - p) * f0 + p * fa - 3.0 * se,
                    "{name} p={p}: {mean} vs {fa}"
                );
                assert!(mean >= (1.0 - p) * f0 - 3.0 * se, "{name} p={p}");
            }
        }
    }
}

#[test]
fn ledger_matches_hand_count() {
    let f: Arc<dyn SetFunction> = Arc::new(random_coverage(12, 30, 0.2, 4));
    let (o, calls) = shimmed(Arc::clone(&f));
    standard_greedy(&o, 3).unwrap();
    random_sampling(&o, 3, 0.5, 2.0, &mut rng(1)).unwrap();
    lazy_greedy_improved(&o, 3, 0.2, &mut rng(2)).unwrap();
    let m = Matroid::partition(
        vec![(0..6).collect(), (6..12).collect()],
        vec![2, 2],
        Arc::clone(o.ledger()),
    )
    .unwrap();
    thresholding_greedy(&o, &m, 0.2).unwrap();
    combined_algorithm(&o, &m, CombinedParams::new(0.5, 2.0).sample_scale(0.01), &mut rng(3)).unwrap();
    assert_eq!(o.ledger().value_queries(), calls.load(Ordering::Relaxed));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginal_is_difference(seed in 0u64..1000, s in 0usize..256, u in 0usize..8) {
        for (_, f) in zoo(8, seed) {
            let o = submax::ValueOracle::from_arc(f, ledger());
            let set = members(s, 8);
            let mut with_u = set.clone();
            with_u.push(u);
            let expected = o.evaluate(&with_u).unwrap() - o.evaluate(&set).unwrap();
            prop_assert!((o.marginal(u, &set, None).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn diminishing_returns(seed in 0u64..1000, a in 0usize..1024, extra in 0usize..1024, u in 0usize..10) {
        let b = a | extra;
        prop_assume!(b >> u & 1 == 0);
        for (name, f) in zoo(10, seed) {
            let va = members(a, 10);
            let vb = members(b, 10);
            let ga = f.eval(&[va.clone(), vec![u]].concat()) - f.eval(&va);
            let gb = f.eval(&[vb.clone(), vec![u]].concat()) - f.eval(&vb);
            prop_assert!(ga >= gb - 1e-9, "{} {} {}", name, ga, gb);
        }
    }
}
