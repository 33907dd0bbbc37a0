//! Numerical building blocks shared by the rest of the crate: a bracketing
//! root solver, normal/gamma special functions, tail quadrature and seeded
//! random streams.

mod quad;
mod random;
mod root;
mod special;

pub use quad::{integrate, integrate_tail};
pub use random::{Dist, RngStream};
pub use root::{find_root, Bracket, Root, DEFAULT_TOL, MAX_ITER};
pub use special::{
    digamma, gamma_cdf, gamma_pdf, gamma_quantile, gamma_sf, ln_gamma, normal_cdf, normal_pdf,
    normal_quantile, normal_sf,
};
