use crate::error::Result;
use crate::models::ui_split_lrt;
use crate::numerics::RngStream;
use crate::threshold::threshold;

use super::config::UiConfig;
use super::parallel::replicate;
use super::row::{format_sig, ScenarioRow};

const SCENARIO: &str = "universal-inference";

fn symmetric_mixture(rng: &mut RngStream, mu: f64, out: &mut [f64]) {
    for x in out {
        let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        *x = sign * mu + rng.standard_normal();
    }
}

/// Rejection rates of the split likelihood-ratio e-test with data from
/// `0.5 N(-μ, 1) + 0.5 N(μ, 1)`, for each configured threshold class.
pub fn run_ui(config: &UiConfig) -> Result<Vec<ScenarioRow>> {
    let mut thresholds = Vec::new();
    for &alpha in &config.alpha {
        for &class in &config.thresholds {
            thresholds.push((alpha, class, threshold(class, alpha)?.value));
        }
    }
    let per_signal = thresholds.len();
    let n = config.n_fit + config.n_test;
    let split = config.n_fit as f64 / n as f64;
    let width = per_signal * config.signals.len();

    let tally = replicate(
        config.replications,
        config.seed,
        config.threads,
        width,
        |tally, rng| {
            let mut data = vec![0.0; n];
            for (si, &mu) in config.signals.iter().enumerate() {
                symmetric_mixture(rng, mu, &mut data);
                let e = ui_split_lrt(&data, split, config.model)?.e_value;
                for (ti, &(_, _, t)) in thresholds.iter().enumerate() {
                    if e >= t {
                        tally[si * per_signal + ti] += 1.0;
                    }
                }
            }
            Ok(())
        },
    )?;

    let mut rows = Vec::new();
    for (si, &mu) in config.signals.iter().enumerate() {
        for (ti, &(alpha, class, _)) in thresholds.iter().enumerate() {
            rows.push(ScenarioRow::proportion(
                SCENARIO,
                "split-lrt",
                class.name(),
                format_sig(mu),
                Some(n),
                alpha,
                tally[si * per_signal + ti],
                config.replications,
            ));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::MixtureModel;
    use crate::threshold::EClass;

    #[test]
    fn nested_thresholds_give_ordered_power() {
        let config = UiConfig {
            replications: 300,
            signals: vec![0.0, 0.8],
            n_fit: 100,
            n_test: 100,
            model: MixtureModel::SymmetricTwoMeans,
            ..UiConfig::default()
        };
        let rows = run_ui(&config).unwrap();
        assert_eq!(rows.len(), 6);
        for chunk in rows.chunks(3) {
            // E0 (10) ≥ D (5) ≥ LDGT0 (4.07) as thresholds
            assert_eq!(chunk[0].threshold, EClass::E0.name());
            assert!(chunk[0].value <= chunk[1].value && chunk[1].value <= chunk[2].value);
        }
        assert!(rows[5].value > rows[2].value);
    }
}
