use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, Subset, ValueOracle};

use super::{random_greedy, standard_greedy, CardinalityOutcome, Pick};

/// Sample fraction `p ∈ (0, 1]` and rank spread `s ∈ [1, ⌈pn⌉]` of the random sampling algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingParams {
    pub p: f64,
    pub s: f64,
    pub k: usize,
}

impl SamplingParams {
    /// `⌈pn⌉`.
    pub fn sample_size(&self, n: usize) -> usize {
        ((self.p * n as f64).ceil() as usize).clamp(1, n.max(1))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidInput(format!("p = {} must lie in (0, 1]", self.p)));
        }
        let q = self.sample_size(n) as f64;
        if !(self.s >= 1.0 && self.s <= q) {
            return Err(Error::InvalidInput(format!("s = {} must lie in [1, {q}]", self.s)));
        }
        Ok(())
    }
}

/// `⌈d⌉` for `d` uniform on `(0, s]`: each rank `r <= ⌊s⌋` has probability `1/s`, and rank
/// `⌊s⌋ + 1` takes the remaining `(s - ⌊s⌋)/s`.
pub fn draw_rank<R: Rng + ?Sized>(s: f64, rng: &mut R) -> usize {
    let d = s * (1.0 - rng.gen::<f64>());
    (d.ceil() as usize).max(1)
}

/// Random sampling: `k` rounds, each drawing `⌈pn⌉` distinct elements uniformly (the sample may
/// contain members of `S`), ranking them by marginal and taking the `⌈d⌉`-th largest for `d`
/// uniform on `(0, s]`; it joins `S` only if its marginal is non-negative.
/// `1 + k⌈pn⌉` value queries.
pub fn random_sampling<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    p: f64,
    s: f64,
    rng: &mut R,
) -> Result<CardinalityOutcome> {
    let n = f.ground_size();
    let params = SamplingParams { p, s, k };
    params.validate(n)?;
    sample_rounds(f, k, params.sample_size(n), s, rng)
}

/// The rounds of [`random_sampling`] with the sample size `q` given directly.
fn sample_rounds<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    q: usize,
    s: f64,
    rng: &mut R,
) -> Result<CardinalityOutcome> {
    let n = f.ground_size();
    let start = f.ledger().snapshot();
    let mut order: Vec<ElementId> = (0..n).collect();
    let mut solution: Vec<ElementId> = Vec::with_capacity(k);
    let mut in_solution = vec![false; n];
    let mut value = f.value(&[]);
    let mut picks = Vec::with_capacity(k);
    let mut scored: Vec<(f64, ElementId, f64)> = Vec::with_capacity(q);
    for _ in 0..k {
        if n == 0 {
            picks.push(Pick::None);
            continue;
        }
        // partial Fisher-Yates: order[..q] becomes a uniform q-subset
        for i in 0..q {
            let j = rng.gen_range(i..n);
            order.swap(i, j);
        }
        scored.clear();
        for &u in &order[..q] {
            let v = f.value_with(&mut solution, u);
            scored.push((v - value, u, v));
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let rank = draw_rank(s, rng).min(q);
        let (gain, u, v) = scored[rank - 1];
        if gain >= 0.0 && !in_solution[u] {
            solution.push(u);
            in_solution[u] = true;
            value = v;
            picks.push(Pick::Real(u));
        } else {
            picks.push(Pick::None);
        }
    }
    Ok(CardinalityOutcome {
        solution: Subset::new(solution),
        picks,
        queries: f.ledger().snapshot().since(&start),
    })
}

/// Monotone configuration: `s = 1` and samples of `⌈n ln(1/ε) / k⌉` elements. For
/// `ε <= e^{-k}` standard greedy is used instead.
pub fn random_sampling_monotone<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    eps: f64,
    rng: &mut R,
) -> Result<CardinalityOutcome> {
    if !f.is_monotone() {
        return Err(Error::Precondition(
            "this configuration requires a monotone objective".into(),
        ));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidInput(format!("eps = {eps} must be positive")));
    }
    if k == 0 {
        return standard_greedy(f, 0);
    }
    if eps <= (-(k as f64)).exp() {
        return standard_greedy(f, k);
    }
    let n = f.ground_size();
    let q = ((n as f64 * (1.0 / eps).ln() / k as f64).ceil() as usize).clamp(1, n.max(1));
    // q/n would not survive the round trip through ⌈pn⌉ in floating point
    sample_rounds(f, k, q, 1.0, rng)
}

/// The unique `δ > 0` with `8 δ⁻² ln(2/δ) = k`, by bisection on `(0, 2)`.
pub fn delta_star(k: usize) -> f64 {
    let g = |d: f64| 8.0 / (d * d) * (2.0 / d).ln();
    let (mut lo, mut hi) = (1e-9f64, 2.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > k as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Non-monotone configuration: `p = 8 ln(2/ε) / (k ε²)` and `s = k⌈pn⌉/n`. Falls back to random
/// greedy when `ε <= δ*(k)`; `ε >= 1/e` is clamped just below `1/e`.
pub fn random_sampling_nonmonotone<R: Rng + ?Sized>(
    f: &ValueOracle,
    k: usize,
    eps: f64,
    rng: &mut R,
) -> Result<CardinalityOutcome> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidInput(format!("eps = {eps} must be positive")));
    }
    if k == 0 {
        return random_greedy(f, 0, rng);
    }
    if eps <= delta_star(k) {
        return random_greedy(f, k, rng);
    }
    let eps = eps.min((-1.0f64).exp() - 1e-6);
    let n = f.ground_size();
    let p = (8.0 / (k as f64 * eps * eps) * (2.0 / eps).ln()).min(1.0);
    let q = ((p * n as f64).ceil() as usize).clamp(1, n.max(1));
    let s = (k as f64 * q as f64 / n.max(1) as f64).clamp(1.0, q as f64);
    sample_rounds(f, k, q, s, rng)
}
