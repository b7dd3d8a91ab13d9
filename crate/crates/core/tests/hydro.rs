use std::f64::consts::PI;

use kinetic_core::hydro::exponents::{gamma_threshold, lambda_for_gamma_threshold, max_admissible_lambda};
use kinetic_core::hydro::scenario::{builtin_catalog, read_catalog, write_verdict_csv, Kappa};
use kinetic_core::hydro::MomentOutcome;
use kinetic_core::rng::SplitMix64;
use kinetic_core::*;
use proptest::prelude::*;

#[test]
fn moments_of_random_maxwellians_round_trip() {
    let q = QuadratureScheme { outer_radius: 12.0, ..QuadratureScheme::default() };
    let mut rng = SplitMix64::new(2024);
    for _ in 0..20 {
        let rho = rng.uniform(0.1, 5.0);
        let u = [rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)];
        let theta = rng.uniform(0.3, 2.0);
        let state = EulerState::new(rho, u, theta).unwrap();
        let m = maxwellian_field(&state).unwrap();
        let MomentOutcome::State(back) = maxwellian_moments(&m, &q).unwrap() else {
            panic!("unexpected vacuum")
        };
        assert!((back.rho() - rho).abs() < 1e-8 * rho);
        for i in 0..3 {
            assert!((back.u()[i] - u[i]).abs() < 1e-8);
        }
        assert!((back.theta() - theta).abs() < 1e-8 * theta);
    }
}

#[test]
fn vacuum_and_cold_gas() {
    let q = QuadratureScheme::default();
    let thin = Maxwellian::new(1e-16, &[0.0; 3], 1.0).unwrap();
    assert!(matches!(maxwellian_moments(&thin, &q).unwrap(), MomentOutcome::Vacuum { .. }));
    let cold = EulerState::cold(1.0, [0.5, 0.0, 0.0]).unwrap();
    assert!(matches!(maxwellian_field(&cold), Err(KineticError::Domain(_))));
    assert!(cold.entropy().is_err());
}

#[test]
fn weighted_norm_matches_a_dense_scan() {
    let mut rng = SplitMix64::new(9);
    for _ in 0..8 {
        let state =
            EulerState::new(rng.uniform(0.5, 2.0), [rng.uniform(-3.0, 3.0), 0.0, rng.uniform(-3.0, 3.0)], rng.uniform(0.2, 2.0))
                .unwrap();
        let gamma = rng.uniform(-3.0, 1.0);
        let out = maxwellian_weighted_norm(&state, gamma).unwrap();
        let m = maxwellian_field(&state).unwrap();
        // scan the plane spanned by u and a perpendicular direction
        let u = state.u();
        let speed = (u[0] * u[0] + u[2] * u[2]).sqrt();
        let e1 = if speed > 0.0 { [u[0] / speed, 0.0, u[2] / speed] } else { [1.0, 0.0, 0.0] };
        let e2 = [0.0, 1.0, 0.0];
        let mut best: f64 = 0.0;
        let r_max = speed + 10.0 * state.theta().sqrt() + 4.0;
        for i in 0..=600 {
            let r = r_max * i as f64 / 600.0;
            for j in 0..=90 {
                let phi = PI * j as f64 / 90.0;
                let v: Vec<f64> = (0..3).map(|k| r * (phi.cos() * e1[k] + phi.sin() * e2[k])).collect();
                best = best.max((1.0 + r * r).powf(0.5 * (3.0 + gamma)) * m.eval(&v));
            }
        }
        assert!(out.value >= best * (1.0 - 1e-12), "scan found a larger value");
        assert!(out.value <= best * (1.0 + 1e-3));
        assert!(out.value <= out.prefactor * out.constant * out.three_term * (1.0 + 1e-12));
    }
}

#[test]
fn entropy_bound_is_monotone_in_temperature() {
    let s0 = EulerState::new(1.0, [0.0; 3], 1.0).unwrap();
    let hot = entropy_bound(&[s0], &EulerState::new(2.0, [0.0; 3], 3.0).unwrap()).unwrap();
    let cool = entropy_bound(&[s0], &EulerState::new(2.0, [0.0; 3], 1.0).unwrap()).unwrap();
    assert!(hot.holds && !cool.holds);
    assert!(hot.margin > cool.margin);
}

#[test]
fn catalog_is_consistent() {
    let cat = builtin_catalog();
    let names: Vec<&str> = cat.iter().map(|s| s.name.as_str()).collect();
    for name in ["smooth", "finite-regularity", "cavity-spherical", "cavity-cylindrical", "guderley-spherical", "guderley-cylindrical"] {
        assert!(names.contains(&name), "missing {name}");
    }
    for sc in &cat {
        sc.validate().unwrap();
        if sc.cold_gas {
            assert!(sc.lambda_closed && sc.lambda_min == sc.lambda_max);
        }
        if let Kappa::Fixed(k) = sc.kappa {
            if !sc.cold_gas {
                assert!(max_admissible_lambda(k).is_some_and(|l| sc.lambda_max <= l));
            }
        }
        if sc.kappa == Kappa::MassEnergyLine {
            assert!(admissible_exponent_check(-3.0 * (sc.lambda_max - 1.0), sc.lambda_max));
        }
    }
}

#[test]
fn coulomb_is_always_excluded() {
    for sc in builtin_catalog() {
        assert_eq!(scenario_verdict(&sc, -3.0).unwrap().verdict, Verdict::Excluded, "{}", sc.name);
    }
}

#[test]
fn verdict_csv_and_custom_catalogs() {
    let text = "name,kappa,lambda_min,lambda_max,lambda_closed,symmetry,cold_gas,notes\n\
                steep,-0.5..-0.2,1.0,1.9,false,spherical,false,\"wide range\"\n";
    let cat = read_catalog(text.as_bytes()).unwrap();
    assert_eq!(cat[0].kappa, Kappa::Range(-0.5, -0.2));
    let v = scenario_verdict(&cat[0], 0.0).unwrap();
    assert_eq!(v.verdict, Verdict::Open);
    let mut buf = Vec::new();
    write_verdict_csv(&mut buf, &[v]).unwrap();
    let out = String::from_utf8(buf).unwrap();
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[..3], ["steep", "0", "open"]);
    assert!((row[3].parse::<f64>().unwrap() - (1.9 / 0.9 - 3.0)).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_are_monotone_in_gamma(g1 in -3.0f64..=1.0, g2 in -3.0f64..=1.0) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        for sc in builtin_catalog() {
            if scenario_verdict(&sc, lo).unwrap().verdict == Verdict::Open {
                prop_assert_eq!(scenario_verdict(&sc, hi).unwrap().verdict, Verdict::Open);
            }
        }
    }

    #[test]
    fn threshold_inverts(lambda in 1.001f64..50.0) {
        let g = gamma_threshold(lambda).unwrap();
        prop_assume!(g > -2.0 && g <= 1.0);
        let back = lambda_for_gamma_threshold(g).unwrap();
        prop_assert!((back - lambda).abs() <= 1e-9 * lambda);
        prop_assert!(blowup_integrability_condition(lambda * (1.0 + 1e-9), g.min(1.0)).unwrap());
    }
}
