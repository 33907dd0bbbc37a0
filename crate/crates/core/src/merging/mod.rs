//! Which class a product or affine shrink of e-values lands in, and tail
//! bounds for weighted averages of independent log-concave e-values.

mod average;
mod product;

pub use average::{avg_tail_bound, avg_threshold, avg_threshold_weighted, WeightVector};
pub use product::{lambda_transform_class, product_class, FactorShape, FactorSpec};
