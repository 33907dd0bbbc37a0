//! Concrete e-statistics: Gaussian likelihood-ratio, mixture and supremum
//! processes, exponential-family comonotonicity, gamma maximum-likelihood
//! supremum statistics and split likelihood-ratio (universal inference)
//! e-values.

mod expfam;
mod gamma;
mod gaussian;
mod mixture;

pub use expfam::{expfam_comonotone, ExpFamSpec, Interval, Monotone, ParamRegion};
pub use gamma::{
    gamma_constrained_mle, gamma_constrained_mle_stats, gamma_log_likelihood, gamma_lr_evalue,
    gamma_sup_stat, gamma_sup_stat_stats, GammaFit, GammaRegion, GammaSuffStats, RegionKind,
};
pub use gaussian::{
    gaussian_lr_evalue, gaussian_mixture_evalue, gaussian_sup_stat, gaussian_sup_type1,
    EProcessState,
};
pub use mixture::{
    em_fit_gaussian_mixture, ui_split_lrt, MixtureFit, MixtureModel, MixtureParams, SplitLrt,
};
