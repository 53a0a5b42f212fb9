use proptest::prelude::*;

use twoway_secrecy::nearfield::geometry::K_WAVE_2G4;
use twoway_secrecy::nearfield::{
    optimize_twoway, rate_tdm, rate_twoway, simulate, ClassifierVariant, Event, GeometryConfig,
    Mode, PowerPolicy, TdmClassifierStats, TwoWayClassifierStats, TwoWayScenario,
};
use twoway_secrecy::Probability;

fn policy() -> PowerPolicy {
    PowerPolicy::uniform(1.0, 10.0).unwrap()
}

fn small_scenario(geometry: GeometryConfig, thetas: usize) -> TwoWayScenario {
    TwoWayScenario {
        geometry,
        thetas: twoway_secrecy::nearfield::theta_grid(thetas),
        pt_grid: (1..100).map(|i| i as f64 / 100.0).collect(),
        trials: 20_000,
        ..TwoWayScenario::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simulation_is_seeded_and_rows_are_distributions(
        r_e in 0.6..20.0f64, theta in 0.0..std::f64::consts::PI, seed in any::<u64>(),
    ) {
        let geo = GeometryConfig::new(1.0, r_e, theta).unwrap();
        let a = simulate(&geo, &policy(), &policy(), Mode::TwoWay, 2_000, seed).unwrap();
        let b = simulate(&geo, &policy(), &policy(), Mode::TwoWay, 2_000, seed).unwrap();
        prop_assert_eq!(&a, &b);
        for v in ClassifierVariant::TWO_WAY_DEFAULT {
            let s = a.twoway_stats(v).unwrap();
            for t in Event::ALL {
                let row: f64 = Event::ALL.iter().map(|&d| s.get(t, d)).sum();
                prop_assert!((row - 1.0).abs() < 1e-12);
            }
            // errors are conditional on the attribution, so undefined ones read as zero
            if s.get(Event::Both, Event::AOnly) == 0.0 {
                prop_assert_eq!(s.p_e_ab_to_a.get(), 0.0);
            }
            if s.get(Event::Both, Event::BOnly) == 0.0 {
                prop_assert_eq!(s.p_e_ab_to_b.get(), 0.0);
            }
        }
        let t = simulate(&geo, &policy(), &policy(), Mode::Tdm, 2_000, seed).unwrap();
        let s = t.tdm_stats(ClassifierVariant::MlFull).unwrap();
        prop_assert!(s.se_m >= 0.0 && s.se_f >= 0.0);
    }

    #[test]
    fn perfect_classifier_leaves_no_secrecy(x in 0.0..=1.0f64, r_e in 0.6..50.0f64, noiseless in any::<bool>()) {
        let geo = GeometryConfig::new(1.0, r_e, 0.3).unwrap();
        let p = Probability::new(x).unwrap();
        let tdm = TdmClassifierStats::new(0.0, 0.0, 0.0).unwrap();
        prop_assert_eq!(rate_tdm(&tdm, p, &geo, &policy(), noiseless).r_s, 0.0);
        prop_assert_eq!(rate_twoway(&TwoWayClassifierStats::perfect(), p, &geo, &policy(), noiseless).r_s, 0.0);
    }

    #[test]
    fn rates_are_clipped_differences(
        x in 0.0..=1.0f64, p_m in 0.0..=1.0f64, p_f in 0.0..=1.0f64, p_e in 0.0..=1.0f64,
    ) {
        let geo = GeometryConfig::new(1.0, 2.0, 0.3).unwrap();
        let p = Probability::new(x).unwrap();
        let r = rate_tdm(&TdmClassifierStats::new(p_m, p_f, p_e).unwrap(), p, &geo, &policy(), true);
        prop_assert!(r.r_s >= 0.0 && r.r_s <= r.r_m + 1e-15);
        prop_assert!((r.r_s - (r.r_m - r.r_ea.max(r.r_eb)).max(0.0)).abs() < 1e-15);
        let r = rate_twoway(&TwoWayClassifierStats::fully_confused(), p, &geo, &policy(), true);
        prop_assert!(r.r_s >= 0.0 && r.r_s <= r.r_m + 1e-15);
    }
}

#[test]
fn oracle_variant_is_always_right() {
    let geo = GeometryConfig::new(1.0, 1.5, 1.0).unwrap();
    let tally = simulate(&geo, &policy(), &policy(), Mode::TwoWay, 5_000, 3).unwrap();
    let s = tally.twoway_stats(ClassifierVariant::Oracle).unwrap();
    for t in Event::ALL {
        assert_eq!(s.get(t, t), 1.0);
    }
}

#[test]
fn optimization_is_reproducible() {
    let sc = small_scenario(GeometryConfig::new(1.0, 0.6111, 0.0).unwrap(), 6);
    let a = optimize_twoway(&sc).unwrap();
    let b = optimize_twoway(&sc).unwrap();
    assert_eq!(a, b);
    let worst = a
        .curve
        .iter()
        .map(|p| p.best.r_s)
        .fold(f64::INFINITY, f64::min);
    assert_eq!(a.overall.r_s, worst);
}

#[test]
fn carrier_phase_ripples_the_distance_curve() {
    // with a 2.4 GHz carrier the collision power depends on Eve's angle
    // through cos(k (d_ae - d_be)), which makes the curve non-monotone
    let mut geo = GeometryConfig::new(1.0, 0.6111, 0.0).unwrap();
    let flat = optimize_twoway(&small_scenario(geo, 64)).unwrap();
    geo.k_wave = K_WAVE_2G4;
    let rippled = optimize_twoway(&small_scenario(geo, 64)).unwrap();
    let drops = |c: &[twoway_secrecy::nearfield::ThetaPoint]| {
        c.windows(2)
            .filter(|w| w[1].best.r_s < w[0].best.r_s - 1e-3)
            .count()
    };
    assert_eq!(drops(&flat.curve), 0);
    assert!(drops(&rippled.curve) > 0);
}
