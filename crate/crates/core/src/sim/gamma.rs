use crate::error::Result;
use crate::models::{
    gamma_lr_evalue, gamma_sup_stat_stats, GammaRegion, GammaSuffStats, RegionKind,
};
use crate::numerics::Dist;

use super::config::GammaConfig;
use super::parallel::replicate;
use super::row::{format_sig, ScenarioRow};

const SCENARIO: &str = "gamma";

fn region_name(kind: RegionKind) -> &'static str {
    match kind {
        RegionKind::Theta1 => "theta1",
        RegionKind::Theta2 => "theta2",
        RegionKind::Theta3 => "theta3",
    }
}

/// Type-I error of the supremum test over each region with null data, and
/// power of the supremum test against the fixed-alternative likelihood
/// ratio test with data from the alternative. Both tests reject at `1/α`.
pub fn run_gamma(config: &GammaConfig) -> Result<Vec<ScenarioRow>> {
    let null = (config.null_shape, config.null_rate);
    let alt = (config.alt_shape, config.alt_rate);
    let regions: Vec<GammaRegion> = config
        .regions
        .iter()
        .map(|&k| GammaRegion::new(k, null.0, null.1))
        .collect::<Result<_>>()?;
    let power_region = GammaRegion::new(config.power_region, null.0, null.1)?;
    let n_alpha = config.alpha.len();
    let type1_width = config.n.len() * regions.len() * n_alpha;
    // supremum and fixed-alternative tests
    let power_width = config.power_n.len() * 2 * n_alpha;
    let n_null = config.n.iter().copied().max().unwrap_or(0);
    let n_alt = config.power_n.iter().copied().max().unwrap_or(0);
    let null_dist = Dist::Gamma {
        shape: null.0,
        rate: null.1,
    };
    let alt_dist = Dist::Gamma {
        shape: alt.0,
        rate: alt.1,
    };

    let mut sorted_n = config.n.clone();
    sorted_n.sort_unstable();
    let mut sorted_power_n = config.power_n.clone();
    sorted_power_n.sort_unstable();

    let tally = replicate(
        config.replications,
        config.seed,
        config.threads,
        type1_width + power_width,
        |tally, rng| {
            let mut stats = GammaSuffStats::new();
            let mut seen = 0;
            for &n in &sorted_n {
                while seen < n {
                    stats.push(rng.sample(null_dist)?)?;
                    seen += 1;
                }
                let ni = config
                    .n
                    .iter()
                    .position(|&m| m == n)
                    .expect("n from the grid");
                for (ri, region) in regions.iter().enumerate() {
                    let y = gamma_sup_stat_stats(&stats, region)?;
                    for (ai, &alpha) in config.alpha.iter().enumerate() {
                        if y >= 1.0 / alpha {
                            tally[(ni * regions.len() + ri) * n_alpha + ai] += 1.0;
                        }
                    }
                }
            }
            debug_assert_eq!(seen, n_null);

            let mut stats = GammaSuffStats::new();
            let mut seen = 0;
            for &n in &sorted_power_n {
                while seen < n {
                    stats.push(rng.sample(alt_dist)?)?;
                    seen += 1;
                }
                let ni = config
                    .power_n
                    .iter()
                    .position(|&m| m == n)
                    .expect("n from the grid");
                let y = gamma_sup_stat_stats(&stats, &power_region)?;
                let e = gamma_lr_evalue(&stats, alt, null)?;
                for (ai, &alpha) in config.alpha.iter().enumerate() {
                    let base = type1_width + (ni * 2) * n_alpha + ai;
                    if y >= 1.0 / alpha {
                        tally[base] += 1.0;
                    }
                    if e >= 1.0 / alpha {
                        tally[base + n_alpha] += 1.0;
                    }
                }
            }
            debug_assert_eq!(seen, n_alt);
            Ok(())
        },
    )?;

    let reps = config.replications;
    let mut rows = Vec::new();
    for (ri, region) in regions.iter().enumerate() {
        for (ai, &alpha) in config.alpha.iter().enumerate() {
            for (ni, &n) in config.n.iter().enumerate() {
                rows.push(ScenarioRow::proportion(
                    SCENARIO,
                    format!("supremum-{}", region_name(region.kind())),
                    "E0",
                    "null",
                    Some(n),
                    alpha,
                    tally[(ni * regions.len() + ri) * n_alpha + ai],
                    reps,
                ));
            }
        }
    }
    let signal = format!("{}/{}", format_sig(alt.0), format_sig(alt.1));
    let sup_name = format!("supremum-{}", region_name(config.power_region));
    for (ai, &alpha) in config.alpha.iter().enumerate() {
        for (ni, &n) in config.power_n.iter().enumerate() {
            let base = type1_width + (ni * 2) * n_alpha + ai;
            let sup = ScenarioRow::proportion(
                SCENARIO,
                &sup_name,
                "E0",
                &signal,
                Some(n),
                alpha,
                tally[base],
                reps,
            );
            let lr = ScenarioRow::proportion(
                SCENARIO,
                "lr-fixed",
                "E0",
                &signal,
                Some(n),
                alpha,
                tally[base + n_alpha],
                reps,
            );
            let ratio = sup.value / lr.value;
            let (s1, s2) = (sup.se.unwrap_or(0.0), lr.se.unwrap_or(0.0));
            let ratio_se = ratio * ((s1 / sup.value).powi(2) + (s2 / lr.value).powi(2)).sqrt();
            rows.push(ScenarioRow {
                test: format!("{sup_name}/lr-fixed"),
                metric: "power_ratio".into(),
                value: ratio,
                se: Some(ratio_se),
                ..sup.clone()
            });
            rows.push(sup);
            rows.push(lr);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_layout_and_validity() {
        let config = GammaConfig {
            replications: 2000,
            n: vec![3, 20],
            power_n: vec![50],
            alpha: vec![0.05],
            ..GammaConfig::default()
        };
        let rows = run_gamma(&config).unwrap();
        assert_eq!(rows.len(), 3 * 2 + 3);
        let se = (0.05 * 0.95 / 2000.0f64).sqrt();
        for r in rows
            .iter()
            .filter(|r| r.test == "supremum-theta2" || r.test == "supremum-theta3")
        {
            if r.signal == "null" {
                assert!(r.value <= 0.05 + 3.0 * se, "{r:?}");
            }
        }
        let theta1 = rows
            .iter()
            .find(|r| r.test == "supremum-theta1" && r.n == Some(3))
            .unwrap();
        assert!(theta1.value > 0.05, "{theta1:?}");
    }
}
