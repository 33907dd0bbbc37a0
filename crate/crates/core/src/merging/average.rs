use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, Bracket};
use crate::threshold::{threshold, worst_case_error, EClass};

/// Merging weights on the standard simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    min: f64,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("weight vector is empty".into()));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(domain("weight", w, "[0, inf)"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(domain("sum of weights", total, "{1}"));
        }
        let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { weights, min })
    }

    /// `T` equal weights `1/T`.
    pub fn equal(t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Invalid("need at least one weight".into()));
        }
        Ok(Self {
            weights: vec![1.0 / t as f64; t],
            min: 1.0 / t as f64,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Smallest weight.
    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn exp_bound(w_min: f64, t: f64) -> f64 {
    (-w_min * (t - 1.0 - t.ln())).exp()
}

/// Bound on `P(Σ w_t E_t ≥ 1/γ)` for independent e-variables with
/// log-concave densities: the smaller of `γ^{-w} e^{-w(1/γ - 1)}`, with `w`
/// the smallest weight, and the unimodal worst case.
pub fn avg_tail_bound(weights: &WeightVector, gamma: f64) -> Result<f64> {
    let unimodal = worst_case_error(EClass::U, gamma)?.value;
    Ok(exp_bound(weights.min, 1.0 / gamma).min(unimodal))
}

/// Threshold for the equal-weight average of `t_count` independent
/// log-concave e-variables.
pub fn avg_threshold(t_count: usize, alpha: f64) -> Result<f64> {
    avg_threshold_weighted(&WeightVector::equal(t_count)?, alpha)
}

/// Smallest `t ≥ 1` at which [`avg_tail_bound`] at `1/t` drops to `α`.
///
/// Both branches decrease in `t`, so this is the smaller of the unimodal
/// threshold and the root of `w (t - 1 - ln t) = -ln α` on `t > 1`.
pub fn avg_threshold_weighted(weights: &WeightVector, alpha: f64) -> Result<f64> {
    let unimodal = threshold(EClass::U, alpha)?.value;
    let w = weights.min;
    if w == 0.0 {
        return Ok(unimodal);
    }
    let level = -alpha.ln() / w;
    // t - 1 - ln t exceeds `level` at t = 2 level + 10
    let bracket = Bracket::with_default_tol(1.0, 2.0 * level + 10.0)?;
    let exponential = find_root(|t| t - 1.0 - t.ln() - level, &bracket)?.x;
    Ok(exponential.min(unimodal).max(1.0))
}
