use rand::Rng;

use crate::algos::thresholding_greedy_valued;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::oracle::{ElementId, Subset, ValueOracle};

use super::{estimate_on_support, EstimatorBudget, FractionalPoint};

/// Parameters of the decreasing-threshold continuous greedy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousGreedyParams {
    pub c: f64,
    pub delta: f64,
    /// Multiplies the per-estimate sample count; 1.0 is the full budget.
    pub sample_scale: f64,
}

impl ContinuousGreedyParams {
    pub fn new(c: f64, delta: f64) -> Self {
        ContinuousGreedyParams {
            c,
            delta,
            sample_scale: 1.0,
        }
    }
}

/// Continuous greedy with the full estimator budget `m = ⌈c ln n / δ²⌉`.
pub fn continuous_greedy<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    c: f64,
    delta: f64,
    rng: &mut R,
) -> Result<FractionalPoint> {
    continuous_greedy_with(f, m, ContinuousGreedyParams::new(c, delta), rng)
}

/// Runs `⌈1/δ⌉` steps. Step `t` builds a base `B_t` by sweeping a threshold from the largest
/// estimated derivative `d` down to `δd/n` by factors of `1 - δ`, adding each element whose
/// estimated derivative at `x + weight * 1_{B_t}` clears the threshold. Bases are completed
/// greedily to full rank, and `x` grows by `weight * 1_{B_t}`.
pub fn continuous_greedy_with<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    params: ContinuousGreedyParams,
    rng: &mut R,
) -> Result<FractionalPoint> {
    let candidates: Vec<ElementId> = (0..f.ground_size()).collect();
    continuous_greedy_over(f, m, params, &candidates, rng)
}

pub(crate) fn continuous_greedy_over<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: &Matroid,
    params: ContinuousGreedyParams,
    candidates: &[ElementId],
    rng: &mut R,
) -> Result<FractionalPoint> {
    let n = f.ground_size();
    if m.ground_size() != n {
        return Err(Error::InvalidInput(format!(
            "objective has {n} elements but the matroid has {}",
            m.ground_size()
        )));
    }
    if !f.is_monotone() {
        return Err(Error::Precondition(
            "continuous greedy requires a monotone objective".into(),
        ));
    }
    if params.c < 1.0 {
        return Err(Error::InvalidInput(format!("c = {} must be at least 1", params.c)));
    }
    let delta = params.delta;
    let budget = EstimatorBudget::scaled(n, params.c, delta, params.sample_scale)?;
    let rank = m.rank_of(candidates);
    let steps = (1.0 / delta).ceil() as usize;
    let mut point = FractionalPoint::zero(n);
    let mut remaining = 1.0f64;
    let mut scratch = Vec::new();

    for _ in 0..steps {
        let weight = delta.min(remaining);
        if weight <= 0.0 {
            break;
        }
        remaining -= weight;

        let mut support = point.support();
        let mut slot: Vec<Option<usize>> = vec![None; n];
        for (i, &(u, _)) in support.iter().enumerate() {
            slot[u] = Some(i);
        }
        let mut d = 0.0f64;
        for &u in candidates {
            d = d.max(estimate_on_support(f, &support, u, budget.m, rng, &mut scratch));
        }

        let mut base: Vec<ElementId> = Vec::with_capacity(rank);
        let mut in_base = vec![false; n];
        if d > 0.0 && rank > 0 {
            let floor = delta * d / n as f64;
            let mut w = d;
            'sweep: while w >= floor {
                for &u in candidates {
                    if in_base[u] || !m.independent_with(&mut base, u) {
                        continue;
                    }
                    let est = estimate_on_support(f, &support, u, budget.m, rng, &mut scratch).max(0.0);
                    if est >= w {
                        base.push(u);
                        in_base[u] = true;
                        match slot[u] {
                            Some(i) => support[i].1 = (support[i].1 + weight).min(1.0),
                            None => {
                                slot[u] = Some(support.len());
                                support.push((u, weight));
                            }
                        }
                        if base.len() == rank {
                            break 'sweep;
                        }
                    }
                }
                w *= 1.0 - delta;
            }
        }
        for &u in candidates {
            if base.len() == rank {
                break;
            }
            if !in_base[u] && m.independent_with(&mut base, u) {
                base.push(u);
                in_base[u] = true;
            }
        }
        point.push(weight, Subset::new(base))?;
    }
    Ok(point)
}

/// `opt = 3 f(S)` for the thresholding greedy output `S` at `ε = 1/6`, so that
/// `f(OPT) <= opt <= 3 f(OPT)` for monotone `f` without self-loops.
pub fn crude_opt_estimate(f: &ValueOracle, m: &Matroid) -> Result<f64> {
    let candidates: Vec<ElementId> = (0..f.ground_size()).collect();
    let (_, value) = thresholding_greedy_valued(f, m, 1.0 / 6.0, &candidates)?;
    Ok(3.0 * value)
}
