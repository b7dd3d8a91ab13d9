use std::f64::consts::PI;

use kinetic_core::verify::hyperplane::{origin_integral_constant_b, origin_integral_limit};
use kinetic_core::*;
use proptest::prelude::*;

/// G(w) = m((m+2)|P_e^perp (e-w)|^2 - (d-1)|e-w|^2) + (d-1)(d+gamma), e = e_1.
fn g_direct(m: f64, d: usize, gamma: f64, w: &[f64]) -> f64 {
    let z: Vec<f64> = w.iter().enumerate().map(|(i, x)| if i == 0 { 1.0 - x } else { -x }).collect();
    let z2: f64 = z.iter().map(|x| x * x).sum();
    let perp = z2 - z[0] * z[0];
    let dm1 = d as f64 - 1.0;
    m * ((m + 2.0) * perp - dm1 * z2) + dm1 * (d as f64 + gamma)
}

fn brute_sup(m: f64, d: usize, gamma: f64, radius: f64) -> f64 {
    let n = 80;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let a = radius * i as f64 / n as f64;
        for j in 0..=2 * n {
            let psi = PI * j as f64 / (2 * n) as f64;
            let mut w = vec![0.0; d];
            w[0] = a * psi.cos();
            w[1] = a * psi.sin();
            best = best.max(g_direct(m, d, gamma, &w));
        }
    }
    best
}

#[test]
fn landau_delta_matches_a_brute_force_sup() {
    for (m, d, gamma) in [(6.0, 3usize, 0.0), (4.5, 3, -1.0), (5.0, 2, 1.0)] {
        let delta = landau_delta_search(m, d, gamma, 1e-8).unwrap().value;
        assert!(brute_sup(m, d, gamma, delta) <= 1e-9, "m = {m}: sup on B_delta is positive");
        assert!(brute_sup(m, d, gamma, 1.02 * delta) > 0.0, "m = {m}: delta is not maximal");
    }
}

#[test]
fn landau_integrand_sup_is_monotone_in_delta() {
    let a = landau_integrand_sup(6.0, 3, 0.0, 0.1, 200).unwrap();
    let b = landau_integrand_sup(6.0, 3, 0.0, 0.5, 200).unwrap();
    assert!(a <= b);
    assert!((a - brute_sup(6.0, 3, 0.0, 0.1)).abs() < 1e-3 * a.abs().max(1.0));
}

#[test]
fn constant_kernel_origin_integral_closed_form() {
    let q = QuadratureScheme::default();
    let k = KernelSpec::boltzmann(3, 0.5, AngularKernel::Constant(1.0)).unwrap();
    for m in [5.0, 5.5, 8.0, 30.0] {
        let got = boltzmann_hyperplane_integral(m, &[0.0; 3], &k, &q).unwrap();
        assert!((got - origin_integral_constant_b(m, 0.5)).abs() < 1e-7 * got.abs().max(1.0));
    }
    assert!((origin_integral_limit(&k, &q).unwrap() + PI).abs() < 1e-7);
}

#[test]
fn boltzmann_delta_requires_m_above_m0() {
    let q = QuadratureScheme::default();
    let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
    assert!(boltzmann_delta_search(4.5, &k, &q).is_err());
    let r = boltzmann_delta_search(8.0, &k, &q).unwrap();
    assert!(r.value > 0.0 && r.value <= 0.5);
    let at = r.value * 0.5;
    assert!(boltzmann_hyperplane_integral(8.0, &[at, 0.0, 0.0], &k, &q).unwrap() <= 0.0);
}

#[test]
fn threshold_report_json_round_trip() {
    let q = QuadratureScheme::default();
    let k = KernelSpec::boltzmann(3, -1.0, AngularKernel::CosSquaredHalf).unwrap();
    let r = boltzmann_m0_search(&k, &q).unwrap();
    let text = r.to_json().unwrap();
    let back = ThresholdReport::from_json(&text).unwrap();
    assert_eq!(back, r);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["parameter", "value", "certificate", "grid"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    // the certificate brackets the sign change
    let below = r.certificate.iter().find(|c| c.label == "integral below threshold").unwrap();
    let at = r.certificate.iter().find(|c| c.label == "integral at threshold").unwrap();
    assert!(below.value >= 0.0 && at.value < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_exists_exactly_above_d_plus_gamma(gamma in -3.0f64..=1.0, offset in -2.0f64..4.0) {
        let d = 3;
        let m = d as f64 + gamma + offset;
        prop_assume!(m > 0.0 && offset.abs() > 1e-6);
        let out = landau_delta_search(m, d, gamma, 1e-4);
        if offset > 0.0 {
            prop_assert!(matches!(out, Ok(r) if r.value > 0.0));
        } else {
            prop_assert!(matches!(out, Err(KineticError::Infeasible(_))));
        }
    }
}
