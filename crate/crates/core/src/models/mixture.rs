use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RngStream;

const MAX_ITER: usize = 500;
const REL_TOL: f64 = 1e-8;
const MIN_SD: f64 = 1e-6;
const MAX_RESTARTS: usize = 5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Parametrisation of the two-component Gaussian alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixtureModel {
    /// `0.5 N(μ₁, 1) + 0.5 N(μ₂, 1)`.
    TwoMeansUnitVar,
    /// `0.5 N(-μ, 1) + 0.5 N(μ, 1)`.
    SymmetricTwoMeans,
    /// `w N(μ₁, σ₁²) + (1 - w) N(μ₂, σ₂²)`.
    Full,
}

/// Parameters of `w N(mean1, sd1²) + (1 - w) N(mean2, sd2²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureParams {
    pub weight: f64,
    pub mean1: f64,
    pub mean2: f64,
    pub sd1: f64,
    pub sd2: f64,
}

fn ln_normal(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
}

impl MixtureParams {
    /// The null `N(0, 1)` written as a mixture.
    pub fn standard_normal() -> Self {
        Self {
            weight: 0.5,
            mean1: 0.0,
            mean2: 0.0,
            sd1: 1.0,
            sd2: 1.0,
        }
    }

    /// Log-density at `x`, with the two components combined by log-sum-exp.
    pub fn ln_density(&self, x: f64) -> f64 {
        let (l1, l2) = self.ln_components(x);
        let m = l1.max(l2);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + ((l1 - m).exp() + (l2 - m).exp()).ln()
    }

    fn ln_components(&self, x: f64) -> (f64, f64) {
        (
            self.weight.ln() + ln_normal(x, self.mean1, self.sd1),
            (1.0 - self.weight).ln() + ln_normal(x, self.mean2, self.sd2),
        )
    }

    /// Posterior probability that `x` came from the first component.
    fn responsibility(&self, x: f64) -> f64 {
        let (l1, l2) = self.ln_components(x);
        1.0 / (1.0 + (l2 - l1).exp())
    }

    pub fn log_likelihood(&self, data: &[f64]) -> f64 {
        data.iter().map(|&x| self.ln_density(x)).sum()
    }
}

/// Outcome of an EM run.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureFit {
    pub params: MixtureParams,
    pub log_likelihood: f64,
    /// Log-likelihood at the start and after every iteration of the
    /// accepted run.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub restarts: usize,
    /// A component variance kept collapsing after every restart.
    pub flagged: bool,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, v.sqrt())
}

fn initial_params(sorted: &[f64], model: MixtureModel) -> MixtureParams {
    let half = sorted.len() / 2;
    let (m1, s1) = mean_sd(&sorted[..half]);
    let (m2, s2) = mean_sd(&sorted[half..]);
    match model {
        MixtureModel::TwoMeansUnitVar => MixtureParams {
            mean1: m1,
            mean2: m2,
            ..MixtureParams::standard_normal()
        },
        MixtureModel::SymmetricTwoMeans => {
            let mu = (m2 - m1) / 2.0;
            MixtureParams {
                mean1: -mu,
                mean2: mu,
                ..MixtureParams::standard_normal()
            }
        }
        MixtureModel::Full => MixtureParams {
            weight: 0.5,
            mean1: m1,
            mean2: m2,
            sd1: s1,
            sd2: s2,
        },
    }
}

fn jittered_params(data: &[f64], restart: usize) -> MixtureParams {
    let (m, s) = mean_sd(data);
    let s = if s > 0.0 { s } else { 1.0 };
    let mut rng = RngStream::new(0x5eed_e11a, restart as u64);
    MixtureParams {
        weight: 0.3 + 0.4 * rng.uniform(),
        mean1: m + s * rng.standard_normal(),
        mean2: m + s * rng.standard_normal(),
        sd1: s,
        sd2: s,
    }
}

fn m_step(data: &[f64], resp: &[f64], model: MixtureModel, prev: &MixtureParams) -> MixtureParams {
    let n = data.len() as f64;
    match model {
        MixtureModel::SymmetricTwoMeans => {
            let mu = data
                .iter()
                .zip(resp)
                .map(|(x, r)| (1.0 - 2.0 * r) * x)
                .sum::<f64>()
                / n;
            MixtureParams {
                mean1: -mu,
                mean2: mu,
                ..MixtureParams::standard_normal()
            }
        }
        MixtureModel::TwoMeansUnitVar | MixtureModel::Full => {
            let (mut w1, mut s1, mut w2, mut s2) = (0.0, 0.0, 0.0, 0.0);
            for (x, r) in data.iter().zip(resp) {
                w1 += r;
                s1 += r * x;
                w2 += 1.0 - r;
                s2 += (1.0 - r) * x;
            }
            let mean1 = if w1 > 0.0 { s1 / w1 } else { prev.mean1 };
            let mean2 = if w2 > 0.0 { s2 / w2 } else { prev.mean2 };
            if model == MixtureModel::TwoMeansUnitVar {
                return MixtureParams {
                    mean1,
                    mean2,
                    ..MixtureParams::standard_normal()
                };
            }
            let (mut v1, mut v2) = (0.0, 0.0);
            for (x, r) in data.iter().zip(resp) {
                v1 += r * (x - mean1) * (x - mean1);
                v2 += (1.0 - r) * (x - mean2) * (x - mean2);
            }
            MixtureParams {
                weight: w1 / n,
                mean1,
                mean2,
                sd1: if w1 > 0.0 { (v1 / w1).sqrt() } else { 0.0 },
                sd2: if w2 > 0.0 { (v2 / w2).sqrt() } else { 0.0 },
            }
        }
    }
}

fn collapsed(p: &MixtureParams) -> bool {
    !(p.sd1 >= MIN_SD && p.sd2 >= MIN_SD && p.weight > 0.0 && p.weight < 1.0)
}

struct Run {
    params: MixtureParams,
    trace: Vec<f64>,
    converged: bool,
    collapsed: bool,
}

fn run_em(data: &[f64], model: MixtureModel, mut params: MixtureParams) -> Run {
    if collapsed(&params) {
        return Run {
            params,
            trace: Vec::new(),
            converged: false,
            collapsed: true,
        };
    }
    let mut ll = params.log_likelihood(data);
    let mut trace = vec![ll];
    let mut resp = vec![0.0; data.len()];
    for _ in 0..MAX_ITER {
        for (r, &x) in resp.iter_mut().zip(data) {
            *r = params.responsibility(x);
        }
        let next = m_step(data, &resp, model, &params);
        if collapsed(&next) {
            return Run {
                params: next,
                trace,
                converged: false,
                collapsed: true,
            };
        }
        let next_ll = next.log_likelihood(data);
        params = next;
        trace.push(next_ll);
        let done = (next_ll - ll).abs() < REL_TOL * ll.abs();
        ll = next_ll;
        if done {
            return Run {
                params,
                trace,
                converged: true,
                collapsed: false,
            };
        }
    }
    Run {
        params,
        trace,
        converged: false,
        collapsed: false,
    }
}

/// Fit a two-component Gaussian mixture by expectation-maximisation.
///
/// Starts from the two half-sample means of the sorted data and stops when
/// the relative change in log-likelihood drops below `1e-8` or after 500
/// iterations. In the full model a component standard deviation below
/// `1e-6` restarts the run from a jittered, deterministic initialisation,
/// at most five times; the last run is then returned flagged.
pub fn em_fit_gaussian_mixture(data: &[f64], model: MixtureModel) -> Result<MixtureFit> {
    if data.len() < 4 {
        return Err(Error::Invalid(format!(
            "EM needs at least 4 observations, got {}",
            data.len()
        )));
    }
    if let Some(x) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::Invalid(format!("non-finite observation {x}")));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut init = initial_params(&sorted, model);
    let mut restarts = 0;
    loop {
        let run = run_em(data, model, init);
        if !run.collapsed || restarts == MAX_RESTARTS {
            let log_likelihood = run.params.log_likelihood(data);
            return Ok(MixtureFit {
                params: run.params,
                log_likelihood,
                iterations: run.trace.len().saturating_sub(1),
                trace: run.trace,
                converged: run.converged,
                restarts,
                flagged: run.collapsed,
            });
        }
        restarts += 1;
        init = jittered_params(data, restarts);
    }
}

/// Split likelihood-ratio e-value and the alternative fitted on the first
/// part of the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitLrt {
    pub e_value: f64,
    pub fit: MixtureFit,
}

/// Universal-inference e-value for `N(0, 1)` against a Gaussian mixture.
///
/// The first `round(split_fraction · n)` observations fit the alternative;
/// the rest evaluate the likelihood ratio of the fit against the null.
pub fn ui_split_lrt(data: &[f64], split_fraction: f64, model: MixtureModel) -> Result<SplitLrt> {
    if !(split_fraction > 0.0 && split_fraction < 1.0) {
        return Err(crate::error::domain(
            "split fraction",
            split_fraction,
            "(0, 1)",
        ));
    }
    let n_fit = (data.len() as f64 * split_fraction).round() as usize;
    if n_fit == 0 || n_fit >= data.len() {
        return Err(Error::Invalid(format!(
            "split of {} observations at {split_fraction} leaves an empty part",
            data.len()
        )));
    }
    let (fit_part, test_part) = data.split_at(n_fit);
    let fit = em_fit_gaussian_mixture(fit_part, model)?;
    Ok(SplitLrt {
        e_value: split_lr(&fit.params, test_part),
        fit,
    })
}

fn split_lr(alt: &MixtureParams, test: &[f64]) -> f64 {
    test.iter()
        .map(|&x| alt.ln_density(x) - ln_normal(x, 0.0, 1.0))
        .sum::<f64>()
        .exp()
}
