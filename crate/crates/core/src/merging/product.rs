use crate::error::{domain, Result};
use crate::threshold::EClass;

/// Distributional knowledge about one factor of a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorShape {
    /// Membership in one of the threshold classes.
    Class(EClass),
    /// Multiplicative strongly unimodal over `[0, inf)`.
    Msu,
    /// Decreasing density on `[0, inf)`, so the mode is at zero. Such
    /// variables are also multiplicative strongly unimodal.
    DecreasingAtZero,
}

impl FactorShape {
    pub fn is_msu(self) -> bool {
        // a log-normal has a log-concave density in log scale
        matches!(
            self,
            FactorShape::Msu | FactorShape::DecreasingAtZero | FactorShape::Class(EClass::Ln)
        )
    }
}

/// One factor `E_t` of a product `E_1 ⋯ E_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorSpec {
    pub shape: FactorShape,
    /// Independent of all the other factors.
    pub independent: bool,
    /// A sequential e-value: conditionally on the earlier factors its mean
    /// is at most one.
    pub sequential: bool,
}

impl FactorSpec {
    pub fn new(shape: FactorShape, independent: bool, sequential: bool) -> Self {
        Self {
            shape,
            independent,
            sequential,
        }
    }

    pub fn sequential(shape: FactorShape) -> Self {
        Self::new(shape, false, true)
    }

    pub fn independent(shape: FactorShape) -> Self {
        Self::new(shape, true, false)
    }
}

/// Class of the product of the factors.
///
/// `D` when the earlier factors are sequential e-values (independent ones
/// qualify) and the last is independent of them with a decreasing density
/// on `[0, inf)`; `U` when every factor is independent and multiplicative
/// strongly unimodal; `E0` otherwise, including for an empty list.
pub fn product_class(factors: &[FactorSpec]) -> EClass {
    let Some((last, prefix)) = factors.split_last() else {
        return EClass::E0;
    };
    let prefix_sequential = prefix.iter().all(|f| f.sequential || f.independent);
    if last.independent && last.shape == FactorShape::DecreasingAtZero && prefix_sequential {
        return EClass::D;
    }
    if factors.iter().all(|f| f.independent && f.shape.is_msu()) {
        return EClass::U;
    }
    EClass::E0
}

/// Class of `1 - λ + λE` given the class of `E`.
///
/// Decreasing, unimodal and log-concave (density or cdf) classes are
/// invariant under this location-scale change. `λ = 0` gives the constant
/// one, reported as `LCF`; `λ = 1` is the identity.
pub fn lambda_transform_class(class: EClass, lambda: f64) -> Result<EClass> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain("lambda", lambda, "[0, 1]"));
    }
    if lambda == 0.0 {
        return Ok(EClass::Lcf);
    }
    if lambda == 1.0 {
        return Ok(class);
    }
    Ok(match class {
        EClass::D | EClass::U | EClass::Lcd | EClass::Lcf => class,
        _ => EClass::E0,
    })
}
