use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// One line of simulation output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRow {
    pub scenario: String,
    pub test: String,
    pub threshold: String,
    pub signal: String,
    pub n: Option<usize>,
    pub alpha: f64,
    pub metric: String,
    pub value: f64,
    /// Monte Carlo standard error, where one applies.
    pub se: Option<f64>,
}

impl ScenarioRow {
    /// A rejection frequency `hits / reps` with its binomial standard error.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn proportion(
        scenario: &str,
        test: impl Into<String>,
        threshold: impl Into<String>,
        signal: impl Into<String>,
        n: Option<usize>,
        alpha: f64,
        hits: f64,
        reps: u64,
    ) -> Self {
        let p = hits / reps as f64;
        Self {
            scenario: scenario.into(),
            test: test.into(),
            threshold: threshold.into(),
            signal: signal.into(),
            n,
            alpha,
            metric: "rejection_rate".into(),
            value: p,
            se: Some((p * (1.0 - p) / reps as f64).sqrt()),
        }
    }
}

/// Format with six significant digits, dropping trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

/// CSV with header `scenario,test,threshold,signal,n,alpha,metric,value,se`.
pub fn write_rows<W: Write>(rows: &[ScenarioRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scenario",
        "test",
        "threshold",
        "signal",
        "n",
        "alpha",
        "metric",
        "value",
        "se",
    ])?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.test.clone(),
            r.threshold.clone(),
            r.signal.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            format_sig(r.alpha),
            r.metric.clone(),
            format_sig(r.value),
            r.se.map(format_sig).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
