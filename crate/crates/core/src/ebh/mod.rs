//! The e-BH procedure and factors by which e-values can be inflated before
//! running it without losing false discovery rate control.

mod boost;
mod generic;
mod procedure;

pub use boost::{boost_lcs_ad, boost_lcs_pr, BoostResult, Criterion, Regime};
pub use generic::{
    boost_generic_ad, boost_generic_pr, boost_relaxed_pr, ExpNull, GammaNull, PointMassNull,
    Survival, BOOST_CAP, BOOST_TOL,
};
pub use procedure::{ebh_reject, fdp, t_transform, DiscoverySet};
