use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{find_root, Bracket};

use super::generic::BOOST_CAP;

/// Dependence assumption among the e-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Arbitrary dependence.
    Ad,
    /// Positive regression dependence on a subset.
    Prds,
}

/// Whether the `T` transform is kept or relaxed to `x 1{x ≥ 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    FullT,
    Relaxed,
}

/// Bounds on an admissible boosting factor.
///
/// The closed-form results for log-concave survival functions bracket the
/// worst-case factor; the generic solvers return an exact factor with
/// `lower == upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostResult {
    pub lower: f64,
    pub upper: f64,
    pub regime: Regime,
    pub criterion: Criterion,
    /// The criterion still held at the search cap, so `upper` is the cap
    /// rather than a crossing.
    pub saturated: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    Ok(())
}

/// The `b ≥ 1` solving `exp(-1/(αb)) (1 + αb) = target`, or 1 when the
/// left side already exceeds the target at `b = 1`.
fn solve_ad(alpha: f64, target: f64) -> Result<f64> {
    let f = |b: f64| (-1.0 / (alpha * b)).exp() * (1.0 + alpha * b) - target;
    if f(1.0) >= 0.0 {
        return Ok(1.0);
    }
    Ok(find_root(f, &Bracket::with_default_tol(1.0, BOOST_CAP)?)?.x)
}

/// Bounds `c₁ ≤ B ≤ c₂` on the worst-case factor for log-concave survival
/// functions under arbitrary dependence: `c₁` and `c₂` solve
/// `exp(-1/(αb)) (1 + αb) = α/e` and `= α` respectively.
pub fn boost_lcs_ad(alpha: f64) -> Result<BoostResult> {
    check_alpha(alpha)?;
    Ok(BoostResult {
        lower: solve_ad(alpha, alpha / std::f64::consts::E)?,
        upper: solve_ad(alpha, alpha)?,
        regime: Regime::Ad,
        criterion: Criterion::Relaxed,
        saturated: false,
    })
}

/// Bounds on the worst-case factor for log-concave survival functions
/// under PRDS: `1/(α - α ln α)` and `e` (for `α ≥ 1/e`) or `-1/(α ln α)`.
pub fn boost_lcs_pr(alpha: f64) -> Result<BoostResult> {
    check_alpha(alpha)?;
    let ln_a = alpha.ln();
    let upper = if alpha >= (-1.0f64).exp() {
        std::f64::consts::E
    } else {
        -1.0 / (alpha * ln_a)
    };
    Ok(BoostResult {
        lower: 1.0 / (alpha - alpha * ln_a),
        upper,
        regime: Regime::Prds,
        criterion: Criterion::Relaxed,
        saturated: false,
    })
}
