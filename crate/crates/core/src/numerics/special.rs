use std::f64::consts::SQRT_2;

use statrs::function::{erf, gamma};

use crate::error::{domain, Result};

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal survival function `1 - Φ(x)`, accurate in the upper tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Standard normal quantile `Φ⁻¹(p)` for `p ∈ (0, 1)`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "(0, 1)"));
    }
    let x = -SQRT_2 * erf::erfc_inv(2.0 * p);
    // One Halley step against the cdf, working in whichever tail is smaller.
    let pdf = normal_pdf(x);
    if pdf <= 0.0 || !x.is_finite() {
        return Ok(x);
    }
    let r = if x <= 0.0 {
        (normal_cdf(x) - p) / pdf
    } else {
        ((1.0 - p) - normal_sf(x)) / pdf
    };
    Ok(x - r / (1.0 + 0.5 * x * r))
}

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("x", x, "(0, inf)"));
    }
    Ok(gamma::digamma(x))
}

fn check_gamma(shape: f64, rate: f64) -> Result<()> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(domain("shape", shape, "(0, inf)"));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(domain("rate", rate, "(0, inf)"));
    }
    Ok(())
}

/// Density of Gamma(shape, rate).
pub fn gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if shape < 1.0 {
            f64::INFINITY
        } else if shape == 1.0 {
            rate
        } else {
            0.0
        };
    }
    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)).exp()
}

/// Cdf of Gamma(shape, rate).
pub fn gamma_cdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        gamma::gamma_lr(shape, rate * x)
    }
}

/// Survival function of Gamma(shape, rate).
pub fn gamma_sf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else {
        gamma::gamma_ur(shape, rate * x)
    }
}

/// Quantile of Gamma(shape, rate).
///
/// Newton iteration on the cdf (or on the survival function above the
/// median, where it is the better conditioned of the two), safeguarded by
/// a bisection bracket that is tightened at every step.
pub fn gamma_quantile(p: f64, shape: f64, rate: f64) -> Result<f64> {
    check_gamma(shape, rate)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p, "[0, 1]"));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    let upper = p > 0.5;
    let q = 1.0 - p;
    // Increasing in x, zero at the quantile.
    let residual = |x: f64| {
        if upper {
            q - gamma_sf(x, shape, rate)
        } else {
            gamma_cdf(x, shape, rate) - p
        }
    };

    // Wilson-Hilferty starting point.
    let z = normal_quantile(p)?;
    let c = 1.0 / (9.0 * shape);
    let wh = shape / rate * (1.0 - c + z * c.sqrt()).powi(3);
    let mut x = if wh > 0.0 && wh.is_finite() {
        wh
    } else {
        shape / rate
    };

    let mut lo = 0.0;
    let mut hi = x.max(shape / rate);
    while residual(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }

    for _ in 0..200 {
        let r = residual(x);
        if r == 0.0 {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let pdf = gamma_pdf(x, shape, rate);
        let newton = x - r / pdf;
        let next = if pdf > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * x.max(f64::MIN_POSITIVE) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
