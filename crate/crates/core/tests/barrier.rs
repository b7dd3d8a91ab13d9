use std::sync::Arc;

use kinetic_core::barrier::MATCH_RADIUS;
use kinetic_core::field::{GaussianBump, GaussianMixture};
use kinetic_core::*;
use proptest::prelude::*;

fn fd_gradient(b: &Barrier, v: &[f64], h: f64) -> Vec<f64> {
    (0..v.len())
        .map(|i| {
            let mut p = v.to_vec();
            let mut m = v.to_vec();
            p[i] += h;
            m[i] -= h;
            (b.value(&p) - b.value(&m)) / (2.0 * h)
        })
        .collect()
}

#[test]
fn outer_region_is_the_pure_power() {
    let b = make_barrier(6.0, 2.5).unwrap();
    for v in [[0.6, 0.0, 0.0], [1.0, -2.0, 0.5], [3.0, 4.0, 12.0]] {
        let r: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((b.value(&v) - 2.5 * r.powf(-6.0)).abs() <= 1e-14 * b.value(&v));
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let b = make_barrier(5.0, 1.0).unwrap();
    for v in [[0.1, 0.2, -0.1], [0.3, 0.3, 0.1], [0.8, -0.4, 0.2], [0.0, 0.0, 0.0]] {
        let g = b.gradient(&v).unwrap();
        let fd = fd_gradient(&b, &v, 1e-5);
        for i in 0..3 {
            assert!((g[i] - fd[i]).abs() < 1e-6 * (1.0 + g.norm()), "gradient at {v:?}");
        }
        let h = b.hessian(&v).unwrap();
        for j in 0..3 {
            let mut p = v.to_vec();
            let mut m = v.to_vec();
            p[j] += 1e-5;
            m[j] -= 1e-5;
            let (gp, gm) = (b.gradient(&p).unwrap(), b.gradient(&m).unwrap());
            for i in 0..3 {
                let fd = (gp[i] - gm[i]) / 2e-5;
                assert!((h[(i, j)] - fd).abs() < 1e-5 * (1.0 + h.norm()), "hessian at {v:?}");
            }
        }
    }
}

#[test]
fn profile_is_twice_differentiable_across_the_matching_sphere() {
    let b = make_barrier(7.0, 1.0).unwrap();
    let dir = [0.48, 0.6, 0.64];
    let at = |r: f64| -> Vec<f64> { dir.iter().map(|x| x * r).collect() };
    let (inside, outside) = (at(MATCH_RADIUS - 1e-9), at(MATCH_RADIUS + 1e-9));
    let scale = b.value(&at(MATCH_RADIUS));
    assert!((b.value(&inside) - b.value(&outside)).abs() < 1e-6 * scale);
    assert!((b.gradient(&inside).unwrap() - b.gradient(&outside).unwrap()).norm() < 1e-6 * scale);
    assert!((b.hessian(&inside).unwrap() - b.hessian(&outside).unwrap()).norm() < 1e-5 * scale);
}

#[test]
fn pure_power_is_singular_only_at_the_origin() {
    let b = pure_power_barrier(4.0, 1.0).unwrap();
    assert!(matches!(b.eval(&[0.0; 3], BarrierOrder::Value), Err(KineticError::Domain(_))));
    assert!(matches!(b.eval(&[0.0; 3], BarrierOrder::Hessian), Err(KineticError::Domain(_))));
    assert!(matches!(b.eval(&[1.0, 0.0, 0.0], BarrierOrder::Value), Ok(BarrierOutput::Value(x)) if x == 1.0));
    assert!(make_barrier(0.0, 1.0).is_err());
    assert!(make_barrier(3.0, -1.0).is_err());
}

#[test]
fn contact_requires_the_field_below_the_barrier() {
    let q = QuadratureScheme::default();
    let k = KernelSpec::landau(3, -3.0).unwrap();
    let b = make_barrier(6.0, 1.0).unwrap();
    let big = GaussianMixture::new(vec![GaussianBump { weight: 10.0, center: vec![0.0; 3], width: 1.0 }]).unwrap();
    let cfg = ContactConfiguration::new(b, Arc::new(big), &[1.0, 0.0, 0.0]);
    assert!(matches!(contact_estimate_check(&cfg, &k, &q), Err(KineticError::Configuration(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barrier_is_positive_and_radially_decreasing(
        m in 0.5f64..20.0,
        r in 0.0f64..5.0,
        dr in 1e-3f64..1.0,
        theta in 0.0f64..3.1,
    ) {
        let b = make_barrier(m, 1.0).unwrap();
        let dir = [theta.cos(), theta.sin(), 0.0];
        let near: Vec<f64> = dir.iter().map(|x| x * r).collect();
        let far: Vec<f64> = dir.iter().map(|x| x * (r + dr)).collect();
        prop_assert!(b.value(&near) > 0.0);
        prop_assert!(b.value(&far) < b.value(&near));
    }
}
