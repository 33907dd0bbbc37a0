use crate::error::{domain, Result};
use crate::numerics::normal_sf;

/// Running sufficient statistic `(n, S_n)` for i.i.d. Gaussian data.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EProcessState {
    n: u64,
    sum: f64,
}

impl EProcessState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State with `n` observations summing to `sum`.
    pub fn from_parts(n: u64, sum: f64) -> Self {
        Self { n, sum }
    }

    pub fn from_data(data: &[f64]) -> Self {
        let mut s = Self::new();
        s.extend(data.iter().copied());
        s
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
    }

    pub fn extend<I: IntoIterator<Item = f64>>(&mut self, xs: I) {
        for x in xs {
            self.push(x);
        }
    }

    /// Combine two disjoint batches.
    pub fn merge(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            sum: self.sum + other.sum,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }
}

/// Likelihood ratio of `N(μ, 1)` against `N(0, 1)`: `exp(μ S_n - n μ² / 2)`.
pub fn gaussian_lr_evalue(mu: f64, state: &EProcessState) -> f64 {
    (mu * state.sum - state.n as f64 * mu * mu / 2.0).exp()
}

/// Standard-normal-prior mixture of the likelihood ratios:
/// `(n + 1)^{-1/2} exp(S_n² / (2n + 2))`. Equals 1 with no data.
pub fn gaussian_mixture_evalue(state: &EProcessState) -> f64 {
    let n = state.n as f64;
    (state.sum * state.sum / (2.0 * n + 2.0)).exp() / (n + 1.0).sqrt()
}

/// Supremum over `μ > 0` of the likelihood ratios, `exp((S_n)_+² / (2n))`.
///
/// Not an e-variable, but `P(Y ≥ t) ≤ P(E_μ ≥ t)`-type control holds because
/// the family is comonotone in `S_n`.
pub fn gaussian_sup_stat(state: &EProcessState) -> Result<f64> {
    if state.n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    let s = state.sum.max(0.0);
    Ok((s * s / (2.0 * state.n as f64)).exp())
}

/// Null probability that the supremum statistic reaches `1/α`:
/// `1 - Φ(√(-2 ln α))`, for every `n`.
pub fn gaussian_sup_type1(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    Ok(normal_sf((-2.0 * alpha.ln()).sqrt()))
}
