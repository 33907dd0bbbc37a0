use crate::error::{domain, Error, Result};

/// `T(x) = K / ⌈K / x⌉` for `x ≥ 1`, zero below one and `K` at infinity.
pub fn t_transform(x: f64, k: usize) -> f64 {
    let kf = k as f64;
    if x.is_infinite() && x > 0.0 {
        return kf;
    }
    if !(x >= 1.0) {
        return 0.0;
    }
    kf / (kf / x).ceil()
}

/// Hypotheses rejected by e-BH.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoverySet {
    /// Indices of the rejected hypotheses, in increasing order.
    pub rejected: Vec<usize>,
    pub k_star: usize,
    pub alpha: f64,
    /// Number of hypotheses tested.
    pub k: usize,
}

impl DiscoverySet {
    pub fn len(&self) -> usize {
        self.k_star
    }

    pub fn is_empty(&self) -> bool {
        self.k_star == 0
    }
}

/// e-BH at level `α`: with `e_(1) ≥ … ≥ e_(K)`, reject the `k*` largest,
/// where `k* = max{k : e_(k) ≥ K / (α k)}` (zero if no such `k`).
pub fn ebh_reject(e: &[f64], alpha: f64) -> Result<DiscoverySet> {
    if e.is_empty() {
        return Err(Error::Invalid("e-BH needs at least one e-value".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    if let Some(&x) = e.iter().find(|x| !(**x >= 0.0)) {
        return Err(domain("e-value", x, "[0, inf]"));
    }
    let k = e.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| e[j].total_cmp(&e[i]));
    let kf = k as f64;
    let k_star = (1..=k)
        .rev()
        .find(|&r| e[order[r - 1]] * alpha * r as f64 >= kf)
        .unwrap_or(0);
    let mut rejected = order[..k_star].to_vec();
    rejected.sort_unstable();
    Ok(DiscoverySet {
        rejected,
        k_star,
        alpha,
        k,
    })
}

/// Share of rejections that fall on true nulls; zero with no rejections.
pub fn fdp(discoveries: &DiscoverySet, is_null: &[bool]) -> Result<f64> {
    if is_null.len() != discoveries.k {
        return Err(Error::Invalid(format!(
            "null indicator has length {}, expected {}",
            is_null.len(),
            discoveries.k
        )));
    }
    let false_rejections = discoveries.rejected.iter().filter(|&&i| is_null[i]).count();
    Ok(false_rejections as f64 / discoveries.k_star.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_transform_examples() {
        assert_eq!(t_transform(0.5, 1000), 0.0);
        assert_eq!(t_transform(f64::INFINITY, 1000), 1000.0);
        assert_eq!(t_transform(3.0, 10), 2.5);
        assert_eq!(t_transform(1.0, 10), 1.0);
        assert_eq!(t_transform(10.0, 10), 10.0);
        assert_eq!(t_transform(f64::NAN, 10), 0.0);
    }

    #[test]
    fn ebh_examples() {
        let none = ebh_reject(&[0.0; 5], 0.1).unwrap();
        assert!(none.is_empty() && none.rejected.is_empty());
        let d = ebh_reject(&[8.0, 0.0, 8.0, 0.0], 0.5).unwrap();
        assert_eq!(d.k_star, 2);
        assert_eq!(d.rejected, vec![0, 2]);
        let all = ebh_reject(&[40.0; 4], 0.1).unwrap();
        assert_eq!(all.k_star, 4);
    }

    #[test]
    fn step_up_skips_gaps() {
        // e_(1) misses K/α = 18 but e_(1..3) clear K/(3α) = 6
        let d = ebh_reject(&[9.0, 9.0, 9.0, 0.0, 0.0, 0.0], 1.0 / 3.0).unwrap();
        assert_eq!(d.k_star, 3);
        let d = ebh_reject(&[17.0, 8.0, 0.0, 0.0, 0.0, 0.0], 1.0 / 3.0).unwrap();
        assert_eq!(d.k_star, 0);
    }

    #[test]
    fn ties_at_boundary_all_rejected() {
        let d = ebh_reject(&[5.0, 5.0, 5.0, 1.0], 0.5).unwrap();
        assert_eq!(d.rejected, vec![0, 1, 2]);
    }

    #[test]
    fn fdp_examples() {
        let empty = ebh_reject(&[0.0; 5], 0.1).unwrap();
        assert_eq!(fdp(&empty, &[true; 5]).unwrap(), 0.0);
        let d = ebh_reject(&[100.0; 5], 0.1).unwrap();
        assert_eq!(fdp(&d, &[true; 5]).unwrap(), 1.0);
        assert_eq!(fdp(&d, &[true, false, true, false, false]).unwrap(), 0.4);
        assert!(fdp(&d, &[true]).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(ebh_reject(&[], 0.1).is_err());
        assert!(ebh_reject(&[1.0], 0.0).is_err());
        assert!(ebh_reject(&[-1.0], 0.1).is_err());
        assert!(ebh_reject(&[f64::NAN], 0.1).is_err());
    }
}
