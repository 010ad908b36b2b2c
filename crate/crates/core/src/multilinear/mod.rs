//! Multilinear extension `F(x) = E[f(R(x))]`: a paired-sample derivative estimator, the
//! decreasing-threshold continuous greedy, and swap rounding back to an independent set.

pub(crate) mod continuous;
pub(crate) mod swap;

use rand::Rng;

use crate::error::{check_ids, Error, Result};
use crate::oracle::{ElementId, Subset, ValueOracle};

pub use continuous::{continuous_greedy, continuous_greedy_with, crude_opt_estimate, ContinuousGreedyParams};
pub use swap::swap_round;

/// One term `weight * 1_base` of a convex combination.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBase {
    pub weight: f64,
    pub base: Subset,
}

/// A point of `[0, 1]^N` kept together with its decomposition into weighted independent sets.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    x: Vec<f64>,
    decomposition: Vec<WeightedBase>,
}

impl FractionalPoint {
    pub fn zero(n: usize) -> Self {
        FractionalPoint {
            x: vec![0.0; n],
            decomposition: Vec::new(),
        }
    }

    /// Builds `x = Σ weight * 1_base`. Weights must be positive and sum to at most 1.
    pub fn from_decomposition(n: usize, terms: Vec<WeightedBase>) -> Result<Self> {
        let mut point = Self::zero(n);
        for t in terms {
            point.push(t.weight, t.base)?;
        }
        Ok(point)
    }

    pub fn push(&mut self, weight: f64, base: Subset) -> Result<()> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "decomposition weight {weight} must be positive"
            )));
        }
        if self.total_weight() + weight > 1.0 + 1e-9 {
            return Err(Error::InvalidInput("decomposition weights sum to more than 1".into()));
        }
        check_ids(base.as_slice(), self.x.len())?;
        for u in base.iter() {
            self.x[u] = (self.x[u] + weight).min(1.0);
        }
        self.decomposition.push(WeightedBase { weight, base });
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn decomposition(&self) -> &[WeightedBase] {
        &self.decomposition
    }

    pub fn total_weight(&self) -> f64 {
        self.decomposition.iter().map(|t| t.weight).sum()
    }

    pub(crate) fn support(&self) -> Vec<(ElementId, f64)> {
        support_of(&self.x)
    }
}

pub(crate) fn support_of(x: &[f64]) -> Vec<(ElementId, f64)> {
    x.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(u, &p)| (u, p))
        .collect()
}

/// Samples per derivative estimate, `m = ⌈scale · c · ln(n) / δ²⌉` (at least 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorBudget {
    pub m: usize,
    pub delta: f64,
    pub c: f64,
}

impl EstimatorBudget {
    pub fn new(n: usize, c: f64, delta: f64) -> Result<Self> {
        Self::scaled(n, c, delta, 1.0)
    }

    /// `scale < 1` shrinks the sample count proportionally, keeping its dependence on `c`.
    pub fn scaled(n: usize, c: f64, delta: f64, scale: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1)")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("c = {c} must be positive")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidInput(format!("sample scale {scale} must be positive")));
        }
        let ln_n = (n.max(1) as f64).ln();
        let m = (scale * c * ln_n / (delta * delta)).ceil().max(1.0) as usize;
        Ok(EstimatorBudget { m, delta, c })
    }
}

/// Mean of `m` paired samples `f(R + u) - f(R - u)` with `R ~ R(x)`; exactly `2m` value queries.
pub fn estimate_marginal<R: Rng + ?Sized>(
    f: &ValueOracle,
    x: &FractionalPoint,
    u: ElementId,
    m: usize,
    rng: &mut R,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("at least one sample is required".into()));
    }
    if x.ground_size() != f.ground_size() {
        return Err(Error::InvalidInput(
            "point and objective have different ground sets".into(),
        ));
    }
    check_ids(&[u], f.ground_size())?;
    let mut scratch = Vec::new();
    Ok(estimate_on_support(f, &x.support(), u, m, rng, &mut scratch))
}

pub(crate) fn estimate_on_support<R: Rng + ?Sized>(
    f: &ValueOracle,
    support: &[(ElementId, f64)],
    u: ElementId,
    m: usize,
    rng: &mut R,
    scratch: &mut Vec<ElementId>,
) -> f64 {
    let mut total = 0.0;
    for _ in 0..m {
        scratch.clear();
        scratch.extend(
            support
                .iter()
                .filter(|&&(v, p)| v != u && rng.gen::<f64>() < p)
                .map(|&(v, _)| v),
        );
        let without = f.value(scratch);
        total += f.value_with(scratch, u) - without;
    }
    total / m as f64
}
