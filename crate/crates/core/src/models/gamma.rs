use crate::error::{domain, Error, Result};
use crate::numerics::{digamma, find_root, ln_gamma, Bracket};

/// Sufficient statistics `(n, Σx, Σ ln x)` of a gamma sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GammaSuffStats {
    n: u64,
    sum: f64,
    sum_log: f64,
}

impl GammaSuffStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_data(data: &[f64]) -> Result<Self> {
        let mut s = Self::new();
        for &x in data {
            s.push(x)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain("gamma observation", x, "(0, inf)"));
        }
        self.n += 1;
        self.sum += x;
        self.sum_log += x.ln();
        Ok(())
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            sum: self.sum + other.sum,
            sum_log: self.sum_log + other.sum_log,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn sum_log(&self) -> f64 {
        self.sum_log
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }
}

/// Which alternative region the supremum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    /// The whole positive quadrant.
    Theta1,
    /// Shape at least the null shape, rate at most the null rate.
    Theta2,
    /// Shape at most the null shape, rate at least the null rate.
    Theta3,
}

/// A (closed) alternative region for Gamma(shape, rate) around a null
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRegion {
    kind: RegionKind,
    null_shape: f64,
    null_rate: f64,
}

impl GammaRegion {
    pub fn new(kind: RegionKind, null_shape: f64, null_rate: f64) -> Result<Self> {
        if !(null_shape > 0.0 && null_shape.is_finite()) {
            return Err(domain("null shape", null_shape, "(0, inf)"));
        }
        if !(null_rate > 0.0 && null_rate.is_finite()) {
            return Err(domain("null rate", null_rate, "(0, inf)"));
        }
        Ok(Self {
            kind,
            null_shape,
            null_rate,
        })
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn null_shape(&self) -> f64 {
        self.null_shape
    }

    pub fn null_rate(&self) -> f64 {
        self.null_rate
    }

    /// Search box for the shape parameter.
    pub fn shape_bounds(&self) -> (f64, f64) {
        let a0 = self.null_shape;
        match self.kind {
            RegionKind::Theta1 => (a0 * 1e-3, a0 * 1e3),
            RegionKind::Theta2 => (a0, a0 * 1e3),
            RegionKind::Theta3 => (a0 * 1e-3, a0),
        }
    }

    /// Admissible rates; the ends may be `0` or `inf`.
    pub fn rate_bounds(&self) -> (f64, f64) {
        let b0 = self.null_rate;
        match self.kind {
            RegionKind::Theta1 => (0.0, f64::INFINITY),
            RegionKind::Theta2 => (0.0, b0),
            RegionKind::Theta3 => (b0, f64::INFINITY),
        }
    }

    pub fn contains(&self, shape: f64, rate: f64) -> bool {
        let (a_lo, a_hi) = match self.kind {
            RegionKind::Theta1 => (0.0, f64::INFINITY),
            RegionKind::Theta2 => (self.null_shape, f64::INFINITY),
            RegionKind::Theta3 => (0.0, self.null_shape),
        };
        let (b_lo, b_hi) = self.rate_bounds();
        shape > 0.0 && rate > 0.0 && (a_lo..=a_hi).contains(&shape) && (b_lo..=b_hi).contains(&rate)
    }
}

/// Result of a constrained maximum-likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: f64,
    pub rate: f64,
    pub log_likelihood: f64,
    /// The optimum sits on the edge of the region or of the shape box.
    pub on_boundary: bool,
    /// All observations are equal, so the unconstrained likelihood has no
    /// maximiser and the fit is pushed to the box edge.
    pub degenerate: bool,
}

fn log_likelihood(stats: &GammaSuffStats, shape: f64, rate: f64) -> f64 {
    let n = stats.n as f64;
    n * (shape * rate.ln() - ln_gamma(shape)) + (shape - 1.0) * stats.sum_log - rate * stats.sum
}

/// Gamma(shape, rate) log-likelihood of `data`.
pub fn gamma_log_likelihood(data: &[f64], shape: f64, rate: f64) -> Result<f64> {
    check_params(shape, rate)?;
    Ok(log_likelihood(
        &GammaSuffStats::from_data(data)?,
        shape,
        rate,
    ))
}

fn check_params(shape: f64, rate: f64) -> Result<()> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(domain("shape", shape, "(0, inf)"));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(domain("rate", rate, "(0, inf)"));
    }
    Ok(())
}

/// Maximum-likelihood fit over the closed region, from data.
pub fn gamma_constrained_mle(data: &[f64], region: &GammaRegion) -> Result<GammaFit> {
    gamma_constrained_mle_stats(&GammaSuffStats::from_data(data)?, region)
}

/// Maximum-likelihood fit over the closed region, from sufficient
/// statistics.
///
/// For a fixed shape `a` the best rate is `a / x̄` clipped to the region.
/// The profile log-likelihood is concave in `a` and its derivative is
/// `n ln b(a) - n ψ(a) + Σ ln x` whether or not the rate is clipped, so the
/// optimum is the root of that score on the shape box, or a box end when
/// the score does not change sign.
pub fn gamma_constrained_mle_stats(
    stats: &GammaSuffStats,
    region: &GammaRegion,
) -> Result<GammaFit> {
    if stats.n < 2 {
        return Err(Error::Invalid(format!(
            "gamma MLE needs at least 2 observations, got {}",
            stats.n
        )));
    }
    let n = stats.n as f64;
    let mean = stats.mean();
    let (b_lo, b_hi) = region.rate_bounds();
    let profile_rate = |a: f64| (a / mean).clamp(b_lo, b_hi);
    let score = |a: f64| {
        let psi = digamma(a).expect("shape box is positive");
        n * profile_rate(a).ln() - n * psi + stats.sum_log
    };

    let (a_lo, a_hi) = region.shape_bounds();
    // ln x̄ - mean(ln x) ≥ 0 with equality iff all observations coincide
    let spread = mean.ln() - stats.sum_log / n;
    let degenerate = spread <= 1e-14 * mean.ln().abs().max(1.0);
    let (s_lo, s_hi) = (score(a_lo), score(a_hi));
    let (shape, box_edge) = if s_lo <= 0.0 {
        (a_lo, true)
    } else if s_hi >= 0.0 {
        (a_hi, true)
    } else {
        let bracket = Bracket::new(a_lo, a_hi, 1e-10 * a_lo.max(1e-3))?;
        (find_root(score, &bracket)?.x, false)
    };
    let rate = profile_rate(shape);
    let unclipped = shape / mean;
    let rate_clipped = unclipped < b_lo || unclipped > b_hi;
    let null_edge = match region.kind {
        RegionKind::Theta1 => false,
        _ => shape == region.null_shape || rate == region.null_rate,
    };
    Ok(GammaFit {
        shape,
        rate,
        log_likelihood: log_likelihood(stats, shape, rate),
        on_boundary: box_edge || rate_clipped || null_edge,
        degenerate,
    })
}

/// Likelihood-ratio e-value of Gamma(θ) against the null over the
/// sample, accumulated in log space.
pub fn gamma_lr_evalue(stats: &GammaSuffStats, theta: (f64, f64), null: (f64, f64)) -> Result<f64> {
    check_params(theta.0, theta.1)?;
    check_params(null.0, null.1)?;
    Ok((log_likelihood(stats, theta.0, theta.1) - log_likelihood(stats, null.0, null.1)).exp())
}

/// Supremum of the likelihood-ratio e-values over the region, from data.
pub fn gamma_sup_stat(data: &[f64], region: &GammaRegion) -> Result<f64> {
    gamma_sup_stat_stats(&GammaSuffStats::from_data(data)?, region)
}

/// Supremum of the likelihood-ratio e-values over the region: the
/// likelihood ratio at the constrained MLE.
pub fn gamma_sup_stat_stats(stats: &GammaSuffStats, region: &GammaRegion) -> Result<f64> {
    let fit = gamma_constrained_mle_stats(stats, region)?;
    let null = log_likelihood(stats, region.null_shape, region.null_rate);
    Ok((fit.log_likelihood - null).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Dist, RngStream};

    fn sample(shape: f64, rate: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        let mut v = vec![0.0; n];
        rng.fill(Dist::Gamma { shape, rate }, &mut v).unwrap();
        v
    }

    fn grid_max(stats: &GammaSuffStats, region: &GammaRegion, a: (f64, f64), b: (f64, f64)) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..400 {
            let shape = a.0 + (a.1 - a.0) * i as f64 / 399.0;
            for j in 0..400 {
                let rate = b.0 + (b.1 - b.0) * j as f64 / 399.0;
                if region.contains(shape, rate) {
                    best = best.max(log_likelihood(stats, shape, rate));
                }
            }
        }
        best
    }

    #[test]
    fn fixed_theta_value() {
        let stats = GammaSuffStats::from_data(&[2.0]).unwrap();
        let e = gamma_lr_evalue(&stats, (1.1, 0.9), (1.0, 1.0)).unwrap();
        assert!((e - 1.225_428_516_349_050_7).abs() < 1e-14, "{e}");
    }

    #[test]
    fn null_theta_gives_one() {
        let stats = GammaSuffStats::from_data(&sample(2.0, 3.0, 50, 1)).unwrap();
        assert_eq!(
            gamma_lr_evalue(&stats, (2.0, 3.0), (2.0, 3.0)).unwrap(),
            1.0
        );
    }

    #[test]
    fn log_space_survives_large_samples() {
        let stats = GammaSuffStats::from_data(&sample(2.0, 1.0, 5000, 2)).unwrap();
        let ln_e = log_likelihood(&stats, 1.9, 1.0) - log_likelihood(&stats, 1.0, 1.0);
        assert!(ln_e > 700.0);
    }

    #[test]
    fn interior_mle_matches_grid() {
        let data = sample(3.0, 2.0, 400, 3);
        let stats = GammaSuffStats::from_data(&data).unwrap();
        let region = GammaRegion::new(RegionKind::Theta2, 1.0, 5.0).unwrap();
        let fit = gamma_constrained_mle(&data, &region).unwrap();
        assert!(!fit.on_boundary);
        // unconstrained score equations
        let n = data.len() as f64;
        assert!((fit.rate - fit.shape / stats.mean()).abs() < 1e-12);
        let s = n * fit.rate.ln() - n * digamma(fit.shape).unwrap() + stats.sum_log();
        assert!(s.abs() < 1e-6, "{s}");
        let g = grid_max(&stats, &region, (1.0, 6.0), (0.5, 5.0));
        assert!(fit.log_likelihood >= g);
        assert!((fit.log_likelihood - g) / g.abs() < 1e-4);
    }

    #[test]
    fn exterior_mle_lands_on_boundary() {
        let data = sample(3.0, 2.0, 400, 4);
        let stats = GammaSuffStats::from_data(&data).unwrap();
        let region = GammaRegion::new(RegionKind::Theta3, 1.0, 1.0).unwrap();
        let fit = gamma_constrained_mle(&data, &region).unwrap();
        assert!(fit.on_boundary);
        assert!(fit.shape == 1.0 || fit.rate == 1.0);
        let g = grid_max(&stats, &region, (1e-3, 1.0), (1.0, 6.0));
        assert!(fit.log_likelihood >= g - 1e-9);
    }

    #[test]
    fn consistent_under_null() {
        let data = sample(2.0, 1.5, 10_000, 5);
        for kind in [RegionKind::Theta2, RegionKind::Theta3] {
            let region = GammaRegion::new(kind, 2.0, 1.5).unwrap();
            let fit = gamma_constrained_mle(&data, &region).unwrap();
            assert!((fit.shape - 2.0).abs() < 0.05, "{kind:?} {fit:?}");
            assert!((fit.rate - 1.5).abs() < 0.05, "{kind:?} {fit:?}");
        }
    }

    #[test]
    fn sup_stat_dominates_region_grid() {
        for (seed, kind) in [(6, RegionKind::Theta2), (7, RegionKind::Theta3)] {
            let data = sample(1.3, 0.8, 30, seed);
            let stats = GammaSuffStats::from_data(&data).unwrap();
            let region = GammaRegion::new(kind, 1.0, 1.0).unwrap();
            let y = gamma_sup_stat(&data, &region).unwrap();
            assert!(y >= 1.0 - 1e-12);
            for i in 0..60 {
                for j in 0..60 {
                    let a = 0.02 + 4.0 * i as f64 / 59.0;
                    let b = 0.02 + 4.0 * j as f64 / 59.0;
                    if region.contains(a, b) {
                        let e = gamma_lr_evalue(&stats, (a, b), (1.0, 1.0)).unwrap();
                        assert!(
                            y - e >= -1e-8 * y.max(1.0),
                            "{kind:?} ({a}, {b}): {y} < {e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_data_is_flagged() {
        let region = GammaRegion::new(RegionKind::Theta2, 1.0, 1.0).unwrap();
        let fit = gamma_constrained_mle(&[0.5; 10], &region).unwrap();
        assert!(fit.degenerate);
        assert!(fit.on_boundary);
    }

    #[test]
    fn invalid_inputs() {
        let region = GammaRegion::new(RegionKind::Theta2, 1.0, 1.0).unwrap();
        assert!(gamma_constrained_mle(&[1.0], &region).is_err());
        assert!(gamma_constrained_mle(&[1.0, -1.0], &region).is_err());
        assert!(GammaRegion::new(RegionKind::Theta2, 0.0, 1.0).is_err());
        assert!(GammaRegion::new(RegionKind::Theta2, 1.0, f64::NAN).is_err());
    }
}
