use evthresh::ebh::{
    boost_generic_ad, boost_lcs_ad, boost_lcs_pr, ebh_reject, t_transform, Criterion, ExpNull,
};
use evthresh::merging::{
    avg_tail_bound, avg_threshold, product_class, FactorShape, FactorSpec, WeightVector,
};
use evthresh::models::{
    em_fit_gaussian_mixture, gamma_lr_evalue, gamma_sup_stat_stats, gaussian_lr_evalue,
    gaussian_sup_stat, EProcessState, GammaRegion, GammaSuffStats, MixtureModel, RegionKind,
};
use evthresh::numerics::{find_root, normal_cdf, Bracket};
use evthresh::sim::{run_scenario, ScenarioConfig};
use evthresh::{threshold, worst_case_error, EClass, Kind};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = EClass> {
    proptest::sample::select(EClass::ALL.to_vec())
}

fn shape() -> impl Strategy<Value = FactorShape> {
    prop_oneof![
        class().prop_map(FactorShape::Class),
        Just(FactorShape::Msu),
        Just(FactorShape::DecreasingAtZero),
    ]
}

fn factor() -> impl Strategy<Value = FactorSpec> {
    (shape(), any::<bool>(), any::<bool>()).prop_map(|(s, i, q)| FactorSpec::new(s, i, q))
}

// nested thresholds: E0 is loosest, then U, then D
fn rank(c: EClass) -> u8 {
    match c {
        EClass::D => 0,
        EClass::U => 1,
        _ => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn markov_dominance(c in class(), gamma in 1e-9f64..=1.0) {
        let r = worst_case_error(c, gamma).unwrap().value;
        prop_assert!(r <= gamma * (1.0 + 1e-12), "{c} {gamma} {r}");
        prop_assert!(r >= 0.0);
    }

    #[test]
    fn worst_case_monotone_in_gamma(c in class(), a in 1e-6f64..0.999, b in 1e-6f64..0.999) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let r_lo = worst_case_error(c, lo).unwrap().value;
        let r_hi = worst_case_error(c, hi).unwrap().value;
        prop_assert!(r_lo <= r_hi + 1e-12);
    }

    #[test]
    fn threshold_monotone_and_at_least_one(c in class(), a in 1e-6f64..0.999, b in 1e-6f64..0.999) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let t_lo = threshold(c, lo).unwrap().value;
        let t_hi = threshold(c, hi).unwrap().value;
        prop_assert!(t_hi >= 1.0);
        prop_assert!(t_hi <= t_lo * (1.0 + 1e-9));
    }

    #[test]
    fn round_trip_for_exact_classes(c in class(), alpha in 1e-5f64..0.999) {
        let t = threshold(c, alpha).unwrap();
        if t.kind == Kind::Exact {
            // a threshold of one is an infimum that is not attained
            let at = if t.value == 1.0 { 1.0 + 1e-9 } else { t.value };
            let r = worst_case_error(c, 1.0 / at).unwrap().value;
            prop_assert!(r <= alpha + 1e-9, "{c} {alpha} {r}");
        }
    }

    #[test]
    fn decreasing_and_unimodal_agree_below_a_third(alpha in 1e-6f64..=1.0 / 3.0) {
        let d = threshold(EClass::D, alpha).unwrap().value;
        prop_assert_eq!(d, threshold(EClass::U, alpha).unwrap().value);
        prop_assert!((d - 0.5 / alpha).abs() <= 1e-12 * d);
    }

    #[test]
    fn root_stays_in_bracket(c in -5.0f64..5.0, lo in -10.0f64..-5.0, hi in 5.0f64..10.0) {
        let b = Bracket::with_default_tol(lo, hi).unwrap();
        let root = find_root(|x| x.powi(3) - c, &b).unwrap();
        prop_assert!(root.x >= lo && root.x <= hi);
        prop_assert!((root.x - c.cbrt()).abs() < 1e-7);
    }

    #[test]
    fn normal_cdf_symmetry(x in -8.0f64..8.0) {
        prop_assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-12);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gaussian_supremum_is_grid_maximum(
        n in 1u64..2000,
        // log of the supremum, kept where the e-values are finite
        log_sup in 0.0f64..600.0,
        negative in proptest::bool::weighted(0.1),
    ) {
        let mean = if negative { -log_sup / 600.0 } else { (2.0 * log_sup / n as f64).sqrt().min(5.0) };
        let st = EProcessState::from_parts(n, mean * n as f64);
        let sup = gaussian_sup_stat(&st).unwrap();
        let grid: Vec<f64> = (1..=5000).map(|i| 5.0 * i as f64 / 5000.0).collect();
        let (mut best, mut at) = (1e-12, 0usize);
        for (i, &mu) in grid.iter().enumerate() {
            let v = gaussian_lr_evalue(mu, &st).ln();
            if i == 0 || v > gaussian_lr_evalue(best, &st).ln() {
                best = mu;
                at = i;
            }
        }
        // refine inside the neighbouring grid cells by golden section
        let (mut a, mut b) = (if at == 0 { 1e-12 } else { grid[at - 1] }, grid[(at + 1).min(grid.len() - 1)]);
        let f = |mu: f64| gaussian_lr_evalue(mu, &st).ln();
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if f(c) >= f(d) { b = d } else { a = c }
        }
        let grid_max = f(0.5 * (a + b)).max(f(1e-12));
        prop_assert!((grid_max - sup.ln()).abs() <= 1e-6 * sup.ln().abs().max(1.0));
        prop_assert!(grid.iter().all(|&mu| gaussian_lr_evalue(mu, &st) <= sup * (1.0 + 1e-12)));
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_supremum_dominates_grid(
        data in proptest::collection::vec(0.01f64..6.0, 2..30),
        kind in prop_oneof![Just(RegionKind::Theta2), Just(RegionKind::Theta3)],
    ) {
        let stats = GammaSuffStats::from_data(&data).unwrap();
        let region = GammaRegion::new(kind, 1.0, 1.0).unwrap();
        let sup = gamma_sup_stat_stats(&stats, &region).unwrap();
        for i in 0..25 {
            for j in 0..25 {
                let shape = 10f64.powf(-2.0 + 4.0 * i as f64 / 24.0);
                let rate = 10f64.powf(-2.0 + 4.0 * j as f64 / 24.0);
                if region.contains(shape, rate) {
                    let e = gamma_lr_evalue(&stats, (shape, rate), (1.0, 1.0)).unwrap();
                    prop_assert!(e <= sup * (1.0 + 1e-8), "{shape} {rate} {e} {sup}");
                }
            }
        }
    }

    #[test]
    fn em_log_likelihood_ascends(
        data in proptest::collection::vec(-6.0f64..6.0, 10..80),
        model in prop_oneof![
            Just(MixtureModel::TwoMeansUnitVar),
            Just(MixtureModel::SymmetricTwoMeans),
            Just(MixtureModel::Full),
        ],
    ) {
        let fit = em_fit_gaussian_mixture(&data, model).unwrap();
        for w in fit.trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10 * w[0].abs().max(1.0), "{:?}", fit.trace);
        }
    }

    #[test]
    fn downgrading_a_factor_never_tightens(
        factors in proptest::collection::vec(factor(), 1..5),
        pick in any::<proptest::sample::Index>(),
    ) {
        let out = product_class(&factors);
        let mut weaker = factors.clone();
        let i = pick.index(weaker.len());
        weaker[i] = FactorSpec::new(FactorShape::Class(EClass::E0), false, false);
        prop_assert!(rank(product_class(&weaker)) >= rank(out));
        let mut weaker = factors.clone();
        weaker[i].independent = false;
        prop_assert!(rank(product_class(&weaker)) >= rank(out));
    }

    #[test]
    fn averages_beat_unimodal(t in 1usize..40, gamma in 1e-4f64..1.0, alpha in 1e-4f64..0.5) {
        let w = WeightVector::equal(t).unwrap();
        let bound = avg_tail_bound(&w, gamma).unwrap();
        prop_assert!(bound <= worst_case_error(EClass::U, gamma).unwrap().value + 1e-12);
        let avg = avg_threshold(t, alpha).unwrap();
        prop_assert!(avg <= threshold(EClass::U, alpha).unwrap().value * (1.0 + 1e-9));
    }

    #[test]
    fn t_transform_never_exceeds_input(x in 1.0f64..1e6, k in 1usize..5000) {
        let t = t_transform(x, k);
        prop_assert!(t <= x);
        prop_assert!(t >= 0.0);
    }

    #[test]
    fn discovery_sets_are_self_consistent(
        e in proptest::collection::vec(prop_oneof![0.0f64..2.0, 0.0f64..200.0], 1..60),
        alpha in 0.001f64..0.5,
    ) {
        let set = ebh_reject(&e, alpha).unwrap();
        let k = e.len() as f64;
        prop_assert_eq!(set.len(), set.k_star);
        prop_assert!(set.rejected.windows(2).all(|w| w[0] < w[1]));
        if let Some(&min_rej) = set.rejected.iter().map(|&i| &e[i]).min_by(|a, b| a.total_cmp(b)) {
            prop_assert!(min_rej * alpha * set.k_star as f64 >= k);
            for (i, &x) in e.iter().enumerate() {
                if !set.rejected.contains(&i) {
                    prop_assert!(x <= min_rej);
                }
            }
        }
        // no larger cutoff qualifies
        let mut sorted = e.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for r in set.k_star + 1..=sorted.len() {
            prop_assert!(sorted[r - 1] * alpha * (r as f64) < k);
        }
    }
}

#[test]
fn class_nesting_orders_errors_and_thresholds() {
    let grid: Vec<f64> = (1..=99)
        .map(|i| i as f64 / 100.0)
        .chain([0.001, 0.005])
        .collect();
    for a in EClass::ALL {
        for b in EClass::ALL {
            if !a.is_subset_of(b) {
                continue;
            }
            for &g in &grid {
                let (ra, rb) = (
                    worst_case_error(a, g).unwrap().value,
                    worst_case_error(b, g).unwrap().value,
                );
                assert!(ra <= rb + 1e-12, "R {a} ⊆ {b} at {g}: {ra} > {rb}");
                let (ta, tb) = (
                    threshold(a, g).unwrap().value,
                    threshold(b, g).unwrap().value,
                );
                assert!(ta <= tb * (1.0 + 1e-9), "T {a} ⊆ {b} at {g}: {ta} > {tb}");
            }
        }
    }
}

#[test]
fn boosting_factors_are_ordered_and_monotone() {
    let grid: Vec<f64> = (1..=40)
        .map(|i| 10f64.powf(-4.0 + 3.0 * i as f64 / 40.0))
        .collect();
    let mut prev: Option<[f64; 4]> = None;
    for &alpha in &grid {
        let ad = boost_lcs_ad(alpha).unwrap();
        let pr = boost_lcs_pr(alpha).unwrap();
        assert!(ad.lower <= ad.upper && pr.lower <= pr.upper);
        let now = [ad.lower, ad.upper, pr.lower, pr.upper];
        if let Some(p) = prev {
            for (x, y) in now.iter().zip(p) {
                assert!(*x <= y * (1.0 + 1e-9), "{alpha}: {now:?} vs {p:?}");
            }
        }
        prev = Some(now);
    }
    let tiny = boost_lcs_ad(1e-6).unwrap();
    assert!(tiny.upper / tiny.lower < 1.1);
    for alpha in [0.01, 0.02, 0.05, 0.1] {
        let generic =
            boost_generic_ad(&ExpNull::default(), alpha, 1000, Criterion::Relaxed).unwrap();
        assert!((generic.lower - boost_lcs_ad(alpha).unwrap().upper).abs() < 1e-6);
    }
}

#[test]
fn simulation_is_deterministic_across_thread_counts() {
    for name in ["gaussian", "universal-inference", "gamma", "ebh"] {
        let mut config = ScenarioConfig::default_for(name).unwrap();
        config.set_replications(40);
        let mut outputs = Vec::new();
        for threads in [1, 2, 5] {
            config.set_threads(threads);
            outputs.push(run_scenario(&config).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{name}");
        assert_eq!(outputs[0], outputs[2], "{name}");
    }
}
