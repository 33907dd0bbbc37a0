use crate::ebh::{
    boost_generic_ad, boost_lcs_ad, ebh_reject, fdp, Criterion, DiscoverySet, ExpNull,
};
use crate::error::{domain, Result};
use crate::numerics::{gamma_quantile, normal_cdf, normal_sf, Dist, RngStream};

use super::config::{Copula, EbhConfig};
use super::parallel::replicate;
use super::row::{format_sig, ScenarioRow};

const SCENARIO: &str = "ebh";
const METHODS: [&str; 4] = ["base", "lcs-boosted", "exact-boosted", "p-bh"];
// sums of discoveries, squared discoveries, fdp and squared fdp
const SLOTS: usize = 4;

/// Fill `out` with standard normals whose pairwise correlation is
/// `-1/(K-1)`, the most negative exchangeable value, by centring i.i.d.
/// normals and rescaling.
pub fn equicorrelated_normals(rng: &mut RngStream, out: &mut [f64]) {
    let k = out.len();
    for x in out.iter_mut() {
        *x = rng.standard_normal();
    }
    if k < 2 {
        return;
    }
    let mean = out.iter().sum::<f64>() / k as f64;
    let scale = (1.0 - 1.0 / k as f64).sqrt();
    for x in out.iter_mut() {
        *x = (*x - mean) / scale;
    }
}

/// Benjamini-Hochberg on p-values: reject the `k*` smallest, where
/// `k* = max{k : p_(k) ≤ αk/K}`.
pub fn pbh_reject(p: &[f64], alpha: f64) -> Result<DiscoverySet> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("alpha", alpha, "(0, 1]"));
    }
    if let Some(&bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(domain("p-value", bad, "[0, 1]"));
    }
    let k = p.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let k_star = (1..=k)
        .rev()
        .find(|&j| p[order[j - 1]] * k as f64 <= alpha * j as f64)
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

fn draw_evalues(
    rng: &mut RngStream,
    config: &EbhConfig,
    b: f64,
    z: &mut [f64],
    e: &mut [f64],
) -> Result<()> {
    match config.copula {
        Copula::Equicorrelated => equicorrelated_normals(rng, z),
        Copula::Independent => z.iter_mut().for_each(|x| *x = rng.standard_normal()),
    }
    for (i, (&x, out)) in z.iter().zip(e.iter_mut()).enumerate() {
        *out = if i < config.k0 {
            -normal_sf(x).ln()
        } else {
            let theta = if b > 0.0 {
                rng.sample(Dist::Exponential { rate: 1.0 / b })?
            } else {
                0.0
            };
            let u = normal_cdf(x).min(1.0 - f64::EPSILON);
            gamma_quantile(u, 1.0 + theta, 1.0 / (1.0 + theta))?
        };
    }
    Ok(())
}

/// Discoveries and false discovery proportion of base, boosted and p-value
/// BH procedures, with the first `k0` hypotheses null with Exp(1) e-values
/// and the rest Gamma(1 + Θ, 1/(1 + Θ)) with Θ exponential of mean `b`.
pub fn run_ebh(config: &EbhConfig) -> Result<Vec<ScenarioRow>> {
    let k = config.k;
    let mut boosts = Vec::new();
    for &alpha in &config.alpha {
        boosts.push([
            1.0,
            boost_lcs_ad(alpha)?.lower,
            boost_generic_ad(&ExpNull::default(), alpha, k, Criterion::FullT)?.lower,
            1.0,
        ]);
    }
    let is_null: Vec<bool> = (0..k).map(|i| i < config.k0).collect();
    let per_alpha = METHODS.len() * SLOTS;
    let per_signal = config.alpha.len() * per_alpha;
    let width = config.signals.len() * per_signal;

    let tally = replicate(
        config.replications,
        config.seed,
        config.threads,
        width,
        |tally, rng| {
            let mut z = vec![0.0; k];
            let mut e = vec![0.0; k];
            let mut scaled = vec![0.0; k];
            for (si, &b) in config.signals.iter().enumerate() {
                draw_evalues(rng, config, b, &mut z, &mut e)?;
                let p: Vec<f64> = e.iter().map(|x| (-x).exp()).collect();
                for (ai, &alpha) in config.alpha.iter().enumerate() {
                    for (mi, &factor) in boosts[ai].iter().enumerate() {
                        let set = if mi == 3 {
                            pbh_reject(&p, alpha)?
                        } else {
                            for (s, &x) in scaled.iter_mut().zip(&e) {
                                *s = factor * x;
                            }
                            ebh_reject(&scaled, alpha)?
                        };
                        let d = set.len() as f64;
                        let q = fdp(&set, &is_null)?;
                        let base = si * per_signal + ai * per_alpha + mi * SLOTS;
                        tally[base] += d;
                        tally[base + 1] += d * d;
                        tally[base + 2] += q;
                        tally[base + 3] += q * q;
                    }
                }
            }
            Ok(())
        },
    )?;

    let reps = config.replications as f64;
    let mean_se = |sum: f64, sq: f64| {
        let mean = sum / reps;
        let var = if reps > 1.0 {
            ((sq - reps * mean * mean) / (reps - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean, (var / reps).sqrt())
    };
    let mut rows = Vec::new();
    for (si, &b) in config.signals.iter().enumerate() {
        for (ai, &alpha) in config.alpha.iter().enumerate() {
            for (mi, method) in METHODS.iter().enumerate() {
                let base = si * per_signal + ai * per_alpha + mi * SLOTS;
                for (metric, off) in [("discoveries", 0), ("fdp", 2)] {
                    let (value, se) = mean_se(tally[base + off], tally[base + off + 1]);
                    rows.push(ScenarioRow {
                        scenario: SCENARIO.into(),
                        test: (*method).into(),
                        threshold: format_sig(boosts[ai][mi]),
                        signal: format_sig(b),
                        n: Some(k),
                        alpha,
                        metric: metric.into(),
                        value,
                        se: Some(se),
                    });
                }
            }
        }
    }
    Ok(rows)
}
