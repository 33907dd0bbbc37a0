use crate::error::Result;
use crate::threshold::{threshold, EClass};

use super::config::GaussianConfig;
use super::parallel::replicate;
use super::row::{format_sig, ScenarioRow};

const SCENARIO: &str = "gaussian";

#[derive(Debug, Clone, Copy)]
enum Stat {
    Lr(f64),
    Mixture,
    Supremum,
}

impl Stat {
    fn ln_value(self, n: usize, s: f64) -> f64 {
        let nf = n as f64;
        match self {
            Stat::Lr(mu) => mu * s - nf * mu * mu / 2.0,
            Stat::Mixture => s * s / (2.0 * nf + 2.0) - 0.5 * (nf + 1.0).ln(),
            Stat::Supremum => {
                let p = s.max(0.0);
                p * p / (2.0 * nf)
            }
        }
    }

    fn label(self) -> String {
        match self {
            Stat::Lr(mu) => format!("lr-{}", format_sig(mu)),
            Stat::Mixture => "mixture".into(),
            Stat::Supremum => "supremum".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Rule {
    stat: Stat,
    label: String,
    ln_threshold: f64,
    /// Compare the running maximum rather than the current value.
    optional_stopping: bool,
}

fn rules(config: &GaussianConfig, alpha: f64) -> Result<Vec<Rule>> {
    let t = |c: EClass| -> Result<(String, f64)> {
        Ok((c.name().to_string(), threshold(c, alpha)?.value.ln()))
    };
    let markov = t(EClass::E0)?;
    let os = ("OS+E0".to_string(), markov.1);
    let mut out = Vec::new();
    let mut push = |stat: Stat, list: Vec<(String, f64)>, with_os: bool| {
        for (label, ln_threshold) in list {
            out.push(Rule {
                stat,
                label,
                ln_threshold,
                optional_stopping: false,
            });
        }
        if with_os {
            out.push(Rule {
                stat,
                label: os.0.clone(),
                ln_threshold: os.1,
                optional_stopping: true,
            });
        }
    };
    let lognormal = vec![
        markov.clone(),
        t(EClass::U)?,
        t(EClass::Lus)?,
        t(EClass::Ln)?,
    ];
    for &mu in &config.mu {
        push(Stat::Lr(mu), lognormal.clone(), true);
    }
    push(Stat::Supremum, lognormal, false);
    push(Stat::Mixture, vec![markov.clone(), t(EClass::U)?], true);
    Ok(out)
}

/// Rejection rates of the likelihood-ratio, mixture and supremum tests of
/// `N(0, 1)` on paths of `N(signal, 1)` data, at every sample size up to
/// `n_max`.
///
/// Rows give the rate at each configured `n`, and, per power target `β`,
/// the first `n` on the step-one grid whose rate reaches `β` (`NaN` when
/// none does).
pub fn run_gaussian(config: &GaussianConfig) -> Result<Vec<ScenarioRow>> {
    let n_max = config.n_max;
    let rule_sets: Vec<Vec<Rule>> = config
        .alpha
        .iter()
        .map(|&a| rules(config, a))
        .collect::<Result<_>>()?;
    let per_alpha = rule_sets[0].len() * n_max;
    let per_signal = per_alpha * config.alpha.len();
    let width = per_signal * config.signals.len();

    let tally = replicate(
        config.replications,
        config.seed,
        config.threads,
        width,
        |tally, rng| {
            let mut running_max = vec![f64::NEG_INFINITY; rule_sets[0].len()];
            for (si, &signal) in config.signals.iter().enumerate() {
                let mut s = 0.0;
                running_max.fill(f64::NEG_INFINITY);
                let mut values = vec![0.0; rule_sets[0].len()];
                for n in 1..=n_max {
                    s += signal + rng.standard_normal();
                    for (ri, rule) in rule_sets[0].iter().enumerate() {
                        let v = rule.stat.ln_value(n, s);
                        running_max[ri] = running_max[ri].max(v);
                        values[ri] = if rule.optional_stopping {
                            running_max[ri]
                        } else {
                            v
                        };
                    }
                    for (ai, rules) in rule_sets.iter().enumerate() {
                        let base = si * per_signal + ai * per_alpha;
                        for (ri, rule) in rules.iter().enumerate() {
                            if values[ri] >= rule.ln_threshold {
                                tally[base + ri * n_max + n - 1] += 1.0;
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    )?;

    let reps = config.replications;
    let mut rows = Vec::new();
    for (si, &signal) in config.signals.iter().enumerate() {
        for (ai, &alpha) in config.alpha.iter().enumerate() {
            for (ri, rule) in rule_sets[ai].iter().enumerate() {
                let base = si * per_signal + ai * per_alpha + ri * n_max;
                let curve = &tally[base..base + n_max];
                for &n in &config.n {
                    rows.push(ScenarioRow::proportion(
                        SCENARIO,
                        rule.stat.label(),
                        &rule.label,
                        format_sig(signal),
                        Some(n),
                        alpha,
                        curve[n - 1],
                        reps,
                    ));
                }
                for &beta in &config.power_targets {
                    let first = curve.iter().position(|&h| h / reps as f64 >= beta);
                    rows.push(ScenarioRow {
                        scenario: SCENARIO.into(),
                        test: rule.stat.label(),
                        threshold: rule.label.clone(),
                        signal: format_sig(signal),
                        n: None,
                        alpha,
                        metric: format!("n_for_power_{}", format_sig(beta)),
                        value: first.map_or(f64::NAN, |i| (i + 1) as f64),
                        se: None,
                    });
                }
            }
        }
    }
    Ok(rows)
}
