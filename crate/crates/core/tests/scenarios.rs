use evthresh::sim::{run_gamma, run_ui, GammaConfig, ScenarioRow, UiConfig};
use evthresh::EClass;

fn rate(rows: &[ScenarioRow], pred: impl Fn(&ScenarioRow) -> bool) -> &ScenarioRow {
    rows.iter().find(|r| pred(r)).expect("row present")
}

#[test]
fn universal_inference_null_rates_and_power_ordering() {
    let config = UiConfig {
        replications: 10_000,
        signals: vec![0.0],
        ..UiConfig::default()
    };
    let rows = run_ui(&config).unwrap();
    let e0 = rate(&rows, |r| r.threshold == EClass::E0.name());
    let ld = rate(&rows, |r| r.threshold == EClass::LdGt0.name());
    assert!((e0.value - 0.013).abs() <= 0.01, "{e0:?}");
    assert!((ld.value - 0.037).abs() <= 0.01, "{ld:?}");

    let config = UiConfig {
        replications: 400,
        signals: vec![0.2, 0.5, 0.8],
        ..UiConfig::default()
    };
    let rows = run_ui(&config).unwrap();
    for chunk in rows.chunks(3) {
        assert!(
            chunk[0].value <= chunk[1].value && chunk[1].value <= chunk[2].value,
            "{chunk:?}"
        );
    }
    let e0: Vec<f64> = rows
        .iter()
        .filter(|r| r.threshold == "E0")
        .map(|r| r.value)
        .collect();
    assert!(e0.windows(2).all(|w| w[0] <= w[1]), "{e0:?}");
}

#[test]
fn gamma_type1_scale_and_power_ratio() {
    let config = GammaConfig {
        replications: 10_000,
        n: vec![2, 10, 50],
        ..GammaConfig::default()
    };
    let rows = run_gamma(&config).unwrap();
    for r in rows
        .iter()
        .filter(|r| r.test == "supremum-theta2" && r.signal == "null" && r.alpha == 0.05)
    {
        // about four times below the level
        assert!(r.value >= 0.05 / 8.0 && r.value <= 0.05 / 2.0, "{r:?}");
    }
    let ratio = rate(&rows, |r| {
        r.metric == "power_ratio" && r.alpha == 0.05 && r.n == Some(50)
    });
    assert!((ratio.value - 1.81).abs() <= 0.3, "{ratio:?}");
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r.metric == "power_ratio" && r.alpha == 0.05)
        .map(|r| r.value)
        .collect();
    assert!(ratios.windows(2).all(|w| w[0] >= w[1]), "{ratios:?}");
}
