use crate::error::{Error, Result};

/// Direction in which a summary-statistic component moves with `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

impl Monotone {
    fn sign(self) -> f64 {
        match self {
            Monotone::Increasing => 1.0,
            Monotone::Decreasing => -1.0,
        }
    }
}

/// An exponential family `h(x) exp{η(θ)·T(x) - A(θ)}` described by its
/// natural-parameter map, the monotonicity of each component of `T` and
/// its log-partition function.
#[derive(Debug, Clone)]
pub struct ExpFamSpec {
    pub name: &'static str,
    pub natural_param: fn(&[f64]) -> Vec<f64>,
    pub stat_directions: Vec<Monotone>,
    pub log_partition: fn(&[f64]) -> f64,
}

fn gamma_eta(theta: &[f64]) -> Vec<f64> {
    vec![theta[0] - 1.0, -theta[1]]
}

fn gamma_log_partition(theta: &[f64]) -> f64 {
    crate::numerics::ln_gamma(theta[0]) - theta[0] * theta[1].ln()
}

impl ExpFamSpec {
    /// Gamma(shape, rate): `η = (shape - 1, -rate)`, `T(x) = (ln x, x)`.
    pub fn gamma() -> Self {
        Self {
            name: "gamma",
            natural_param: gamma_eta,
            stat_directions: vec![Monotone::Increasing, Monotone::Increasing],
            log_partition: gamma_log_partition,
        }
    }

    pub fn dim(&self) -> usize {
        self.stat_directions.len()
    }
}

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Interior points spread over the interval, including points close to
    /// both ends.
    fn probes(&self) -> Vec<f64> {
        const FRACTIONS: [f64; 7] = [1e-6, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0 - 1e-6];
        const OFFSETS: [f64; 7] = [1e-6, 0.01, 0.5, 1.0, 10.0, 1e3, 1e6];
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => FRACTIONS
                .iter()
                .map(|f| self.lo + f * (self.hi - self.lo))
                .collect(),
            (true, false) => {
                let scale = self.lo.abs().max(1.0);
                OFFSETS.iter().map(|o| self.lo + o * scale).collect()
            }
            (false, true) => {
                let scale = self.hi.abs().max(1.0);
                OFFSETS.iter().map(|o| self.hi - o * scale).collect()
            }
            (false, false) => OFFSETS
                .iter()
                .flat_map(|o| [-o, *o])
                .chain(std::iter::once(0.0))
                .collect(),
        }
    }
}

/// A box-shaped parameter region, one open interval per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRegion {
    pub intervals: Vec<Interval>,
}

impl ParamRegion {
    pub fn new(intervals: Vec<Interval>) -> Self {
        Self { intervals }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.intervals.len() != dim {
            return Err(Error::Invalid(format!(
                "region has {} coordinates, family has {dim}",
                self.intervals.len()
            )));
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo >= iv.hi {
                return Err(Error::Invalid(format!(
                    "coordinate {i}: empty or malformed interval ({}, {})",
                    iv.lo, iv.hi
                )));
            }
        }
        Ok(())
    }

    fn grid(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for iv in &self.intervals {
            let probes = iv.probes();
            points = points
                .into_iter()
                .flat_map(|p| {
                    probes.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

/// Whether the likelihood-ratio e-variables `{dQ_θ/dQ_θ₀ : θ ∈ region}` are
/// comonotone.
///
/// Each component of `η(θ) - η(θ₀)` must keep one sign across the region,
/// and, combined with the direction of the matching component of `T`, all
/// components must push the likelihood ratio the same way in `x`. Sign
/// constancy is checked on a probe grid covering the box.
pub fn expfam_comonotone(spec: &ExpFamSpec, theta0: &[f64], region: &ParamRegion) -> Result<bool> {
    let dim = spec.dim();
    if theta0.len() != dim {
        return Err(Error::Invalid(format!(
            "null parameter has {} coordinates, family has {dim}",
            theta0.len()
        )));
    }
    region.validate(dim)?;
    let eta0 = (spec.natural_param)(theta0);
    let mut direction = 0.0;
    for theta in region.grid() {
        let eta = (spec.natural_param)(&theta);
        for (j, (e, e0)) in eta.iter().zip(&eta0).enumerate() {
            let diff = e - e0;
            if !diff.is_finite() {
                return Err(Error::Invalid(format!(
                    "natural parameter not finite at {theta:?}"
                )));
            }
            if diff == 0.0 {
                continue;
            }
            let s = diff.signum() * spec.stat_directions[j].sign();
            if direction == 0.0 {
                direction = s;
            } else if s != direction {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
