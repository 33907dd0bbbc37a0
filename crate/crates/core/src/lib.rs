//! Improved rejection thresholds for e-values under distributional
//! assumptions.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ebh;
pub mod error;
pub mod merging;
pub mod models;
pub mod numerics;
pub mod sim;
pub mod tables;
pub mod threshold;

pub use error::{Error, Result};
pub use threshold::{
    calibrate, precise_p, threshold, threshold_by_inversion, worst_case_error, BoundedValue,
    EClass, Kind,
};
