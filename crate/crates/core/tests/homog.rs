use kinetic_core::field::{GaussianBump, GaussianMixture};
use kinetic_core::homog::solver::homog_run_with_state;
use kinetic_core::*;

fn bump_field() -> GaussianMixture {
    GaussianMixture::new(vec![
        GaussianBump { weight: 0.6, center: vec![0.5, 0.0, 0.0], width: 1.0 },
        GaussianBump { weight: 0.4, center: vec![-0.4, 0.3, 0.0], width: 0.9 },
    ])
    .unwrap()
}

fn settings(t_end: f64, cfl: f64) -> HomogSettings {
    HomogSettings { t_end, cfl, weight: 6.0, max_steps: 10_000 }
}

#[test]
fn zero_field_stays_zero() {
    let g = GridField::zeros(3, 8, 4.0).unwrap();
    let k = KernelSpec::landau(3, -3.0).unwrap();
    let (log, end) = homog_run_with_state(&g, &k, &settings(1.0, 0.25)).unwrap();
    assert!(log.is_complete());
    assert!(end.values.iter().all(|&x| x == 0.0));
    assert_eq!(log.conservation_drift(), 0.0);
}

#[test]
fn maxwellian_is_stationary() {
    let m = Maxwellian::new(1.0, &[0.3, 0.0, -0.2], 0.9).unwrap();
    let g = GridField::sample(&m, 16, 8.0).unwrap();
    for gamma in [-3.0, -1.0, 0.0] {
        let k = KernelSpec::landau(3, gamma).unwrap();
        let s = HomogSettings { max_steps: 200, ..settings(1e3, 0.25) };
        let (log, end) = homog_run_with_state(&g, &k, &s).unwrap();
        assert_eq!(log.records.len(), 201, "gamma = {gamma}: {:?}", log.status);
        let first = log.records[0];
        for r in &log.records {
            for (a, b) in [(r.norm_m, first.norm_m), (r.norm_dpg, first.norm_dpg), (r.mass, first.mass), (r.energy, first.energy)] {
                assert!((a - b).abs() <= 1e-3 * b, "gamma = {gamma}: norm drift at t = {}", r.t);
            }
        }
        let err = end.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-5 * g.max_value(), "gamma = {gamma}: drifted by {err:e}");
    }
}

#[test]
fn midpoint_stepping_is_second_order_in_time() {
    let g = GridField::sample(&bump_field(), 16, 8.0).unwrap();
    let k = KernelSpec::landau(3, -3.0).unwrap();
    let run = |cfl: f64| homog_run_with_state(&g, &k, &settings(0.05, cfl)).unwrap().1.values;
    let (a, b, c) = (run(0.4), run(0.2), run(0.1));
    let dist = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let order = (dist(&a, &b) / dist(&b, &c)).log2();
    assert!(order >= 1.9, "observed order {order}");
}

#[test]
fn bump_run_conserves_and_stays_nonnegative() {
    let g = GridField::sample(&bump_field(), 16, 8.0).unwrap();
    let k = KernelSpec::landau(3, -2.0).unwrap();
    let log = homog_run(&g, &k, &settings(0.2, 0.25)).unwrap().into_result().unwrap();
    assert!(log.conservation_drift() < 1e-3);
    assert!(log.records.iter().all(|r| r.negmax <= 1e-12 * g.max_value()));
    assert!(log.max_growth_excess.iter().all(|&e| e <= 1e-8 * g.max_value()));
    let check = gronwall_check(&log.records, 1.0).unwrap();
    assert_eq!(check.margins.len(), log.records.len());
}

#[test]
fn run_log_csv_round_trip() {
    let g = GridField::sample(&bump_field(), 8, 10.0).unwrap();
    let k = KernelSpec::landau(3, 0.0).unwrap();
    let log = homog_run(&g, &k, &settings(0.05, 0.25)).unwrap();
    let mut buf = Vec::new();
    log.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,norm_m,norm_dpg,mass,px,py,pz,energy,negmax\n"));
    assert_eq!(RunLog::read_csv(&text).unwrap(), log.records);
}

#[test]
fn binary_grid_round_trip_and_validation() {
    let g = GridField::sample(&bump_field(), 8, 10.0).unwrap();
    let mut buf = Vec::new();
    g.write_binary(&mut buf).unwrap();
    assert_eq!(buf.len(), 32 + 8 * 512);
    let back = GridField::read_binary(buf.as_slice()).unwrap();
    assert_eq!(back.values, g.values);
    assert_eq!((back.n, back.v_max, back.h), (g.n, g.v_max, g.h));
    assert!(GridField::read_binary(&buf[..100]).is_err());
    // a field that reaches the box edge is rejected before stepping
    let wide = GridField::sample(&bump_field(), 8, 2.0).unwrap();
    let k = KernelSpec::landau(3, -3.0).unwrap();
    assert!(matches!(homog_run(&wide, &k, &settings(0.1, 0.25)), Err(KineticError::Configuration(_))));
}
