//! Worst-case type-I errors `R_γ`, improved rejection thresholds `T_α` and
//! the smallest e-to-p calibrators for each [`EClass`].
//!
//! `R_γ(𝓔) = sup_{E ∈ 𝓔} P(E ≥ 1/γ)` and `T_α(𝓔)` is the smallest `t ≥ 1`
//! with `R_{1/t}(𝓔) ≤ α`. Rejecting when `E ≥ T_α(𝓔)` keeps the type-I
//! error at `α` for every member of the class.

mod class;

use std::f64::consts::E;
use std::fmt;

use serde::Serialize;

pub use class::EClass;

use crate::error::{domain, Result};
use crate::numerics::{find_root, normal_cdf, normal_quantile, Bracket, DEFAULT_TOL};

/// Whether a [`BoundedValue`] is the exact worst case or only a valid bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exact,
    Conservative,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Exact => "exact",
            Kind::Conservative => "conservative",
        })
    }
}

/// A probability or threshold together with the class and argument it was
/// computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedValue {
    pub value: f64,
    pub kind: Kind,
    pub class: EClass,
    /// `γ` for a worst-case error, `α` for a threshold.
    pub arg: f64,
}

fn kind_of(class: EClass) -> Kind {
    if class.is_conservative() {
        Kind::Conservative
    } else {
        Kind::Exact
    }
}

/// `t_γ`: the root of `t (1 - ln t) = γ` in `[1, e]`.
fn log_decreasing_root(gamma: f64) -> f64 {
    if gamma >= 1.0 {
        return 1.0;
    }
    let br = Bracket::new(1.0, E, DEFAULT_TOL).expect("static bracket");
    find_root(|t| t * (1.0 - t.ln()) - gamma, &br)
        .expect("t(1 - ln t) - γ changes sign on [1, e] for γ in (0, 1)")
        .x
}

/// `R_γ(𝓔_LCS) = 1 + s_γ` where `e^{s/γ} = 1 + s`, `s ∈ (-1, 0)`.
///
/// Solved for `u = ln(1 + s)`, i.e. `γ u - e^u + 1 = 0` on
/// `(-1/γ - 1, ln γ)`, which keeps full relative precision when the answer
/// is of order `e^{-1/γ}`.
fn log_concave_survival(gamma: f64) -> f64 {
    if gamma >= 1.0 {
        return 1.0;
    }
    let lo = -1.0 / gamma - 1.0;
    let hi = gamma.ln();
    let br = Bracket::new(lo, hi, DEFAULT_TOL).expect("lo < ln γ for γ in (0, 1)");
    let u = find_root(|u| gamma * u - u.exp() + 1.0, &br)
        .expect("γu - e^u + 1 changes sign on (-1/γ - 1, ln γ)")
        .x;
    u.exp()
}

fn dgt1(gamma: f64) -> f64 {
    gamma / (1.0 + (1.0 - gamma * gamma).max(0.0).sqrt())
}

fn unimodal(gamma: f64) -> f64 {
    (gamma / 2.0).max(2.0 * gamma - 1.0)
}

fn log_symmetric(gamma: f64) -> f64 {
    if gamma < 1.0 {
        gamma.min(0.5)
    } else {
        1.0
    }
}

fn log_unimodal_symmetric_bound(gamma: f64) -> f64 {
    let first = if gamma < 1.0 {
        gamma / (E * (1.0 - gamma * gamma))
    } else {
        f64::INFINITY
    };
    let via_ldgt0 = gamma / log_decreasing_root(gamma);
    first
        .min(dgt1(gamma))
        .min(via_ldgt0)
        .min(log_symmetric(gamma))
}

/// `R_γ` (or its best known upper bound) for `γ ∈ (0, 1]`, without
/// argument checks.
fn worst_case_value(class: EClass, gamma: f64) -> f64 {
    match class {
        EClass::E0 | EClass::Lu | EClass::Lcf => gamma,
        EClass::D => {
            if gamma < 1.0 {
                gamma / 2.0
            } else {
                1.0
            }
        }
        EClass::DGt1 => dgt1(gamma),
        EClass::U => unimodal(gamma),
        EClass::Ls => log_symmetric(gamma),
        EClass::LdGt0 => gamma / log_decreasing_root(gamma),
        EClass::Ld | EClass::Lus => log_unimodal_symmetric_bound(gamma),
        EClass::Ln => {
            if gamma < 1.0 {
                normal_cdf(-(-2.0 * gamma.ln()).sqrt())
            } else {
                1.0
            }
        }
        EClass::Lcs => log_concave_survival(gamma),
        EClass::Lcd => unimodal(gamma).min(log_concave_survival(gamma)),
    }
}

/// Worst-case probability `R_γ(class)` that an e-variable of the class
/// reaches `1/γ`.
///
/// For `LUS`, `LD` and `LCD` the value is the smallest available upper
/// bound and is tagged [`Kind::Conservative`].
pub fn worst_case_error(class: EClass, gamma: f64) -> Result<BoundedValue> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain("gamma", gamma, "(0, 1]"));
    }
    Ok(BoundedValue {
        value: worst_case_value(class, gamma),
        kind: kind_of(class),
        class,
        arg: gamma,
    })
}

fn threshold_value(class: EClass, alpha: f64) -> f64 {
    let markov = 1.0 / alpha;
    let dgt1 = 1.0 / (2.0 * alpha) + alpha / 2.0;
    let ldgt0 = (alpha - 1.0).exp() / alpha;
    let lcs = -alpha.ln() / (1.0 - alpha);
    let unimodal = if alpha <= 1.0 / 3.0 {
        1.0 / (2.0 * alpha)
    } else {
        2.0 / (1.0 + alpha)
    };
    let t = match class {
        EClass::E0 | EClass::Lu | EClass::Lcf => markov,
        EClass::D => 1.0 / (2.0 * alpha),
        EClass::DGt1 => dgt1,
        EClass::U => unimodal,
        EClass::Ls => {
            if alpha < 0.5 {
                markov
            } else {
                1.0
            }
        }
        EClass::Lcs => lcs,
        EClass::LdGt0 => ldgt0,
        EClass::Ln => {
            if alpha < 0.5 {
                let q = normal_quantile(alpha).expect("alpha in (0, 1/2)");
                (q * q / 2.0).exp()
            } else {
                1.0
            }
        }
        EClass::Lus | EClass::Ld => {
            if alpha < 0.5 {
                let ae = alpha * E;
                let gamma_star = (-1.0 + (1.0 + 4.0 * ae * ae).sqrt()) / (2.0 * ae);
                ldgt0.min(1.0 / gamma_star).min(dgt1)
            } else {
                1.0
            }
        }
        EClass::Lcd => unimodal.min(lcs),
    };
    t.max(1.0)
}

/// Improved rejection threshold `T_α(class)` from the closed forms.
pub fn threshold(class: EClass, alpha: f64) -> Result<BoundedValue> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    Ok(BoundedValue {
        value: threshold_value(class, alpha),
        kind: kind_of(class),
        class,
        arg: alpha,
    })
}

/// `T_α(class)` computed by numerically inverting [`worst_case_error`]:
/// the smallest `t ≥ 1` with `R_{1/t} ≤ α`.
///
/// Slower than [`threshold`]; kept as an independent route for checking
/// the closed forms.
pub fn threshold_by_inversion(class: EClass, alpha: f64) -> Result<BoundedValue> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    // R_{1/t} ≤ 1/t, so the crossing lies below 2/α.
    let hi = 2.0 / alpha;
    let br = Bracket::new(1.0, hi, DEFAULT_TOL)?;
    let g = |t: f64| worst_case_value(class, 1.0 / t) - alpha;
    let root = find_root(g, &br)?;
    // Report the smallest admissible point of the final bracket.
    let value = if g(root.x) <= 0.0 {
        root.x
    } else {
        (root.x + root.width).min(hi)
    };
    Ok(BoundedValue {
        value: value.max(1.0),
        kind: kind_of(class),
        class,
        arg: alpha,
    })
}

/// The smallest e-to-p calibrator for `class`: `min(1, R_{1/e}(class))`,
/// with `e ≤ 1` mapped to 1 and `e = ∞` mapped to 0.
pub fn calibrate(class: EClass, e: f64) -> f64 {
    if e.is_nan() || e <= 1.0 {
        return 1.0;
    }
    if e.is_infinite() {
        return 0.0;
    }
    worst_case_value(class, 1.0 / e).min(1.0)
}

/// The precise p-value `F(x)` obtained as the reciprocal of the supremum of
/// all e-variables that are decreasing functions of a statistic with cdf `F`.
pub fn precise_p<F: Fn(f64) -> f64>(cdf: F, x: f64) -> f64 {
    cdf(x).clamp(0.0, 1.0)
}
