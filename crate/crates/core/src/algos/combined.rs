use rand::Rng;

use crate::error::{Error, Result};
use crate::ledger::LedgerSnapshot;
use crate::matroid::{remove_self_loops, Matroid};
use crate::multilinear::{continuous::continuous_greedy_over, swap::round_general, swap_round, ContinuousGreedyParams};
use crate::oracle::{ElementId, Subset, ValueOracle};

use super::lazy::{random_lazy_greedy_over, LazyGreedyOutcome, Scan};

/// Which LinearGreedy and rounding the combined algorithm uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CombinedMode {
    /// Treats the matroid as a black-box independence oracle.
    #[default]
    General,
    /// Bucketed LinearGreedy and block-wise swap rounding; needs a partition matroid.
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedParams {
    pub eps: f64,
    pub lambda: f64,
    pub mode: CombinedMode,
    /// Replaces `B` for diagnostics (a tiny value forces the failure branch).
    pub b_override: Option<f64>,
    /// Scales the continuous greedy's per-estimate sample count; 1.0 is the full budget.
    pub sample_scale: f64,
}

impl CombinedParams {
    pub fn new(eps: f64, lambda: f64) -> Self {
        CombinedParams {
            eps,
            lambda,
            mode: CombinedMode::General,
            b_override: None,
            sample_scale: 1.0,
        }
    }

    pub fn mode(mut self, mode: CombinedMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn sample_scale(mut self, scale: f64) -> Self {
        self.sample_scale = scale;
        self
    }

    pub fn b_override(mut self, b: f64) -> Self {
        self.b_override = Some(b);
        self
    }

    /// Parameters handed to the two phases for a matroid of rank `k`.
    pub fn internal(&self, k: usize) -> InternalParameters {
        let k = k as f64;
        InternalParameters {
            delta: 0.5,
            b: self.b_override.unwrap_or(20.0 * k / (self.lambda * self.eps)),
            iterations: (self.lambda / 3.0).ceil() as usize,
            c: 240.0 * k / (self.lambda * self.eps) + 2.0,
            continuous_delta: self.eps / 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalParameters {
    /// Random lazy greedy accuracy.
    pub delta: f64,
    pub b: f64,
    pub iterations: usize,
    /// Continuous greedy scale constant.
    pub c: f64,
    pub continuous_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedOutcome {
    pub solution: Subset,
    pub failed: bool,
    pub rank: usize,
    pub internal: Option<InternalParameters>,
    pub lazy: Option<LazyGreedyOutcome>,
    pub queries: LedgerSnapshot,
}

/// `λ = k` when `k ≤ √(n ε⁻⁵) ln(n/ε)`, else that threshold; clamped to `[1, k]`.
pub fn choose_lambda(n: usize, k: usize, eps: f64) -> f64 {
    let n = n.max(3) as f64;
    let threshold = (n / eps.powi(5)).sqrt() * (n / eps).ln();
    let k = k.max(1) as f64;
    if k <= threshold {
        k
    } else {
        threshold.clamp(1.0, k)
    }
}

/// The combined algorithm: drop self-loops, run the random lazy greedy with `δ = 1/2`,
/// `B = 20k/(λε)`, `I = ⌈λ/3⌉`, and on success complete its output `S` by continuous greedy on
/// `M / S` with objective `f(· | S)`, `c = 240k/(λε) + 2`, `δ = ε/4`, followed by swap rounding.
/// If the first phase fails the result is `∅` with `failed` set. Rank 1 is solved by one scan.
pub fn combined_algorithm<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    params: CombinedParams,
    rng: &mut R,
) -> Result<CombinedOutcome> {
    let start = f.ledger().snapshot();
    let eps = params.eps;
    if !(eps > 0.0 && eps < 1.0 - (-1.0f64).exp()) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1 - 1/e)")));
    }
    if f.ground_size() != m.ground_size() {
        return Err(Error::InvalidInput(
            "objective and matroid have different ground sets".into(),
        ));
    }
    if !f.is_monotone() {
        return Err(Error::Precondition(
            "the combined algorithm requires a monotone objective".into(),
        ));
    }
    let partition = match params.mode {
        CombinedMode::General => None,
        CombinedMode::Partition => Some(
            m.partition_structure()
                .ok_or_else(|| Error::InvalidInput("partition mode needs a partition matroid".into()))?,
        ),
    };

    let candidates = remove_self_loops(m);
    let rank = m.rank_of(&candidates);
    let done = |solution: Subset, failed: bool, internal, lazy| CombinedOutcome {
        solution,
        failed,
        rank,
        internal,
        lazy,
        queries: f.ledger().snapshot().since(&start),
    };
    if rank == 0 {
        return Ok(done(Subset::empty(), false, None, None));
    }
    if !(params.lambda >= 1.0 && params.lambda <= rank as f64) {
        return Err(Error::InvalidInput(format!(
            "lambda = {} must lie in [1, {rank}]",
            params.lambda
        )));
    }
    if rank == 1 {
        let mut best: Option<(f64, ElementId)> = None;
        for &u in &candidates {
            let v = f.value(&[u]);
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, u));
            }
        }
        let solution = best.map(|(_, u)| Subset::new([u])).unwrap_or_else(Subset::empty);
        return Ok(done(solution, false, None, None));
    }

    let internal = params.internal(rank);
    let scan = if partition.is_some() {
        Scan::Partition
    } else {
        Scan::General
    };
    let lazy = random_lazy_greedy_over(
        f,
        m,
        internal.delta,
        internal.b,
        internal.iterations,
        &candidates,
        rank,
        scan,
        rng,
    )?;
    let Some(first) = lazy.solution.clone() else {
        return Ok(done(Subset::empty(), true, Some(internal), Some(lazy)));
    };

    let view = m.contract(first.as_slice())?;
    let residual = f.conditioned(first.as_slice())?;
    let rest: Vec<ElementId> = candidates.iter().copied().filter(|&u| !first.contains(u)).collect();
    let cg = ContinuousGreedyParams {
        c: internal.c,
        delta: internal.continuous_delta,
        sample_scale: params.sample_scale,
    };
    let point = continuous_greedy_over(&residual, &view, cg, &rest, rng)?;
    let second = match partition {
        Some(_) => swap_round(&view, &point, rng)?,
        None => round_general(&view, &point, rng)?,
    };
    Ok(done(first.union(&second), false, Some(internal), Some(lazy)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Modular;
    use crate::QueryLedger;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::sync::Arc;

    #[test]
    fn internal_parameters() {
        let p = CombinedParams::new(0.1, 30.0).internal(100);
        assert!((p.b - 2000.0 / 3.0).abs() < 1e-9);
        assert_eq!(p.iterations, 10);
        assert!((p.c - 8002.0).abs() < 1e-9);
        assert!((p.continuous_delta - 0.025).abs() < 1e-15);
        assert_eq!(p.delta, 0.5);
    }

    #[test]
    fn lambda_choice() {
        assert_eq!(choose_lambda(1_000_000, 10, 0.5), 10.0);
        let t = (1e6f64 * 32.0).sqrt() * (2e6f64).ln();
        assert!((t - 8.2e4).abs() < 1e3);
        let big = choose_lambda(10, 1_000_000, 0.9);
        let t = (10.0 / 0.9f64.powi(5)).sqrt() * (10.0 / 0.9f64).ln();
        assert!((big - t).abs() < 1e-9);
        for k in [1, 5, 50, 5000] {
            assert!(choose_lambda(20, k, 0.5) <= k as f64);
        }
    }

    #[test]
    fn rank_one_takes_best_singleton() {
        let ledger = Arc::new(QueryLedger::new());
        let f = ValueOracle::new(Modular::new(vec![1.0, 5.0, 3.0]).unwrap(), Arc::clone(&ledger));
        let m = Matroid::uniform(3, 1, ledger);
        let out = combined_algorithm(&f, &m, CombinedParams::new(0.2, 1.0), &mut StdRng::seed_from_u64(0)).unwrap();
        assert_eq!(out.solution, Subset::new([1]));
        assert!(!out.failed);
    }

    #[test]
    fn tiny_b_forces_failure() {
        let ledger = Arc::new(QueryLedger::new());
        let f = ValueOracle::new(
            Modular::new(vec![1.0, 5.0, 3.0, 2.0, 4.0, 6.0]).unwrap(),
            Arc::clone(&ledger),
        );
        let m = Matroid::uniform(6, 6, ledger);
        let params = CombinedParams::new(0.2, 6.0).b_override(0.0);
        let out = combined_algorithm(&f, &m, params, &mut StdRng::seed_from_u64(0)).unwrap();
        assert!(out.failed);
        assert!(out.solution.is_empty());
    }

    #[test]
    fn lambda_out_of_range() {
        let ledger = Arc::new(QueryLedger::new());
        let f = ValueOracle::new(Modular::new(vec![1.0; 4]).unwrap(), Arc::clone(&ledger));
        let m = Matroid::uniform(4, 2, ledger);
        let mut rng = StdRng::seed_from_u64(0);
        assert!(combined_algorithm(&f, &m, CombinedParams::new(0.2, 3.0), &mut rng).is_err());
        assert!(combined_algorithm(&f, &m, CombinedParams::new(0.7, 1.0), &mut rng).is_err());
    }

    #[test]
    fn general_and_partition_modes_return_bases() {
        let ledger = Arc::new(QueryLedger::new());
        let f = ValueOracle::new(
            Modular::new(vec![1.0, 5.0, 3.0, 2.0, 4.0, 6.0]).unwrap(),
            Arc::clone(&ledger),
        );
        let m = Matroid::partition(vec![vec![0, 1, 2], vec![3, 4, 5]], vec![1, 2], ledger).unwrap();
        for mode in [CombinedMode::General, CombinedMode::Partition] {
            let params = CombinedParams::new(0.5, 1.0).mode(mode).sample_scale(1e-3);
            let out = combined_algorithm(&f, &m, params, &mut StdRng::seed_from_u64(1)).unwrap();
            assert_eq!(out.solution.len(), 3);
            assert!(m.uncounted().is_independent(out.solution.as_slice()).unwrap());
        }
    }
}
