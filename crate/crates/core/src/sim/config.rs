use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{MixtureModel, RegionKind};
use crate::threshold::EClass;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "EVTHRESH_THREADS";

/// A scenario document, tagged by its `scenario` key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum ScenarioConfig {
    Gaussian(GaussianConfig),
    UniversalInference(UiConfig),
    Gamma(GammaConfig),
    Ebh(EbhConfig),
}

fn default_seed() -> u64 {
    1
}

/// Sequential Gaussian tests of `N(0, 1)` with likelihood-ratio, mixture
/// and supremum statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianConfig {
    #[serde(default = "GaussianConfig::default_replications")]
    pub replications: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "GaussianConfig::default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Means of the simulated data.
    #[serde(default = "GaussianConfig::default_signals")]
    pub signals: Vec<f64>,
    /// Alternatives of the likelihood-ratio e-processes.
    #[serde(default = "GaussianConfig::default_mu")]
    pub mu: Vec<f64>,
    /// Sample sizes reported as rejection-rate rows.
    #[serde(default = "GaussianConfig::default_n")]
    pub n: Vec<usize>,
    /// Power levels for which the first sample size reaching them is
    /// reported.
    #[serde(default = "GaussianConfig::default_power_targets")]
    pub power_targets: Vec<f64>,
    /// Length of each simulated path.
    #[serde(default = "GaussianConfig::default_n_max")]
    pub n_max: usize,
}

impl GaussianConfig {
    fn default_replications() -> u64 {
        10_000
    }
    fn default_alpha() -> Vec<f64> {
        vec![0.05]
    }
    fn default_signals() -> Vec<f64> {
        vec![0.3]
    }
    fn default_mu() -> Vec<f64> {
        vec![0.2, 0.3, 0.4]
    }
    fn default_n() -> Vec<usize> {
        vec![10, 50, 100, 500]
    }
    fn default_power_targets() -> Vec<f64> {
        vec![0.5, 0.9, 0.95, 0.99]
    }
    fn default_n_max() -> usize {
        1000
    }
}

impl Default for GaussianConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// Split likelihood-ratio tests of `N(0, 1)` against a two-component
/// mixture, with data from `0.5 N(-μ, 1) + 0.5 N(μ, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UiConfig {
    #[serde(default = "UiConfig::default_replications")]
    pub replications: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "UiConfig::default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default = "UiConfig::default_signals")]
    pub signals: Vec<f64>,
    /// Observations used to fit the alternative.
    #[serde(default = "UiConfig::default_split")]
    pub n_fit: usize,
    /// Observations used to evaluate the likelihood ratio.
    #[serde(default = "UiConfig::default_split")]
    pub n_test: usize,
    #[serde(default = "UiConfig::default_model")]
    pub model: MixtureModel,
    #[serde(default = "UiConfig::default_thresholds")]
    pub thresholds: Vec<EClass>,
}

impl UiConfig {
    fn default_replications() -> u64 {
        10_000
    }
    fn default_alpha() -> Vec<f64> {
        vec![0.1]
    }
    fn default_signals() -> Vec<f64> {
        (0..=12).map(|i| i as f64 / 10.0).collect()
    }
    fn default_split() -> usize {
        200
    }
    fn default_model() -> MixtureModel {
        MixtureModel::Full
    }
    fn default_thresholds() -> Vec<EClass> {
        vec![EClass::E0, EClass::D, EClass::LdGt0]
    }
}

impl Default for UiConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// Supremum tests within the gamma family: type-I error under the null
/// for each region, and power against a fixed alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaConfig {
    #[serde(default = "GammaConfig::default_replications")]
    pub replications: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "GammaConfig::default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default = "GammaConfig::default_one")]
    pub null_shape: f64,
    #[serde(default = "GammaConfig::default_one")]
    pub null_rate: f64,
    #[serde(default = "GammaConfig::default_regions")]
    pub regions: Vec<RegionKind>,
    /// Sample sizes for the type-I error rows.
    #[serde(default = "GammaConfig::default_n")]
    pub n: Vec<usize>,
    #[serde(default = "GammaConfig::default_alt_shape")]
    pub alt_shape: f64,
    #[serde(default = "GammaConfig::default_alt_rate")]
    pub alt_rate: f64,
    #[serde(default = "GammaConfig::default_power_region")]
    pub power_region: RegionKind,
    /// Sample sizes for the power rows; empty skips the power study.
    #[serde(default = "GammaConfig::default_power_n")]
    pub power_n: Vec<usize>,
}

impl GammaConfig {
    fn default_replications() -> u64 {
        10_000
    }
    fn default_alpha() -> Vec<f64> {
        vec![0.01, 0.05]
    }
    fn default_one() -> f64 {
        1.0
    }
    fn default_regions() -> Vec<RegionKind> {
        vec![RegionKind::Theta1, RegionKind::Theta2, RegionKind::Theta3]
    }
    fn default_n() -> Vec<usize> {
        (2..=50).collect()
    }
    fn default_alt_shape() -> f64 {
        1.1
    }
    fn default_alt_rate() -> f64 {
        0.9
    }
    fn default_power_region() -> RegionKind {
        RegionKind::Theta2
    }
    fn default_power_n() -> Vec<usize> {
        vec![50, 100, 200, 500]
    }
}

impl Default for GammaConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// Dependence among the simulated e-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Copula {
    /// Gaussian copula with all correlations `-1/(K-1)`.
    Equicorrelated,
    Independent,
}

/// e-BH with and without boosting on `K` e-values of which the first
/// `K₀` are null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EbhConfig {
    #[serde(default = "EbhConfig::default_replications")]
    pub replications: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "EbhConfig::default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default = "EbhConfig::default_k")]
    pub k: usize,
    #[serde(default = "EbhConfig::default_k0")]
    pub k0: usize,
    /// Mean `b` of the exponential signal strength.
    #[serde(default = "EbhConfig::default_signals")]
    pub signals: Vec<f64>,
    #[serde(default = "EbhConfig::default_copula")]
    pub copula: Copula,
}

impl EbhConfig {
    fn default_replications() -> u64 {
        1000
    }
    fn default_alpha() -> Vec<f64> {
        vec![0.01, 0.02, 0.05, 0.1]
    }
    fn default_k() -> usize {
        1000
    }
    fn default_k0() -> usize {
        500
    }
    fn default_signals() -> Vec<f64> {
        vec![3.0, 4.0, 5.0]
    }
    fn default_copula() -> Copula {
        Copula::Equicorrelated
    }
}

impl Default for EbhConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Config(format!("`{name}` must not be empty")));
    }
    Ok(())
}

fn probabilities(name: &str, v: &[f64]) -> Result<()> {
    nonempty(name, v)?;
    if let Some(p) = v.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::Config(format!(
            "`{name}` entry {p} is not in (0, 1)"
        )));
    }
    Ok(())
}

fn finite(name: &str, v: &[f64]) -> Result<()> {
    nonempty(name, v)?;
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::Config(format!("`{name}` entry {x} is not finite")));
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Config(format!("`{name}` = {x} must be positive")));
    }
    Ok(())
}

fn common(replications: u64, alpha: &[f64], threads: Option<usize>) -> Result<()> {
    if replications == 0 {
        return Err(Error::Config("`replications` must be at least 1".into()));
    }
    if threads == Some(0) {
        return Err(Error::Config("`threads` must be at least 1".into()));
    }
    probabilities("alpha", alpha)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioConfig::Gaussian(_) => "gaussian",
            ScenarioConfig::UniversalInference(_) => "universal-inference",
            ScenarioConfig::Gamma(_) => "gamma",
            ScenarioConfig::Ebh(_) => "ebh",
        }
    }

    /// Paper-scale defaults for the named scenario.
    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "gaussian" => ScenarioConfig::Gaussian(GaussianConfig::default()),
            "universal-inference" | "ui" => ScenarioConfig::UniversalInference(UiConfig::default()),
            "gamma" => ScenarioConfig::Gamma(GammaConfig::default()),
            "ebh" => ScenarioConfig::Ebh(EbhConfig::default()),
            other => return Err(Error::Config(format!("unknown scenario `{other}`"))),
        })
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ScenarioConfig::Gaussian(c) => c.seed = seed,
            ScenarioConfig::UniversalInference(c) => c.seed = seed,
            ScenarioConfig::Gamma(c) => c.seed = seed,
            ScenarioConfig::Ebh(c) => c.seed = seed,
        }
    }

    pub fn set_threads(&mut self, threads: usize) {
        let t = Some(threads);
        match self {
            ScenarioConfig::Gaussian(c) => c.threads = t,
            ScenarioConfig::UniversalInference(c) => c.threads = t,
            ScenarioConfig::Gamma(c) => c.threads = t,
            ScenarioConfig::Ebh(c) => c.threads = t,
        }
    }

    pub fn set_replications(&mut self, replications: u64) {
        match self {
            ScenarioConfig::Gaussian(c) => c.replications = replications,
            ScenarioConfig::UniversalInference(c) => c.replications = replications,
            ScenarioConfig::Gamma(c) => c.replications = replications,
            ScenarioConfig::Ebh(c) => c.replications = replications,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScenarioConfig::Gaussian(c) => {
                common(c.replications, &c.alpha, c.threads)?;
                finite("signals", &c.signals)?;
                finite("mu", &c.mu)?;
                nonempty("n", &c.n)?;
                if c.n.contains(&0) {
                    return Err(Error::Config("`n` entries must be at least 1".into()));
                }
                if let Some(&big) = c.n.iter().max().filter(|&&m| m > c.n_max) {
                    return Err(Error::Config(format!(
                        "`n` entry {big} exceeds `n_max` = {}",
                        c.n_max
                    )));
                }
                if let Some(b) = c.power_targets.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
                    return Err(Error::Config(format!(
                        "`power_targets` entry {b} is not in (0, 1]"
                    )));
                }
                Ok(())
            }
            ScenarioConfig::UniversalInference(c) => {
                common(c.replications, &c.alpha, c.threads)?;
                finite("signals", &c.signals)?;
                nonempty("thresholds", &c.thresholds)?;
                if c.n_fit < 4 || c.n_test == 0 {
                    return Err(Error::Config(
                        "`n_fit` must be at least 4 and `n_test` at least 1".into(),
                    ));
                }
                Ok(())
            }
            ScenarioConfig::Gamma(c) => {
                common(c.replications, &c.alpha, c.threads)?;
                for (name, x) in [
                    ("null_shape", c.null_shape),
                    ("null_rate", c.null_rate),
                    ("alt_shape", c.alt_shape),
                    ("alt_rate", c.alt_rate),
                ] {
                    positive(name, x)?;
                }
                nonempty("regions", &c.regions)?;
                nonempty("n", &c.n)?;
                if c.n.iter().chain(&c.power_n).any(|&n| n < 2) {
                    return Err(Error::Config(
                        "gamma sample sizes must be at least 2".into(),
                    ));
                }
                Ok(())
            }
            ScenarioConfig::Ebh(c) => {
                common(c.replications, &c.alpha, c.threads)?;
                nonempty("signals", &c.signals)?;
                if let Some(b) = c.signals.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
                    return Err(Error::Config(format!(
                        "`signals` entry {b} must be nonnegative"
                    )));
                }
                if c.k < 2 || c.k0 > c.k {
                    return Err(Error::Config(format!(
                        "need k >= 2 and k0 <= k, got k = {}, k0 = {}",
                        c.k, c.k0
                    )));
                }
                Ok(())
            }
        }
    }
}
