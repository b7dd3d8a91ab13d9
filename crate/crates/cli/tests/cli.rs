use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn kinetic(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("run.ini");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_kinetic"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(dir, "manifest.json")).unwrap()
}

#[test]
fn m0_search_for_constant_kernel() {
    let dir = TempDir::new().unwrap();
    let out = kinetic(dir.path(), "[run]\ncommand = m0-search\n[kernel]\ndim = 3\ngamma = 0\nb = constant\n", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "m0.json")).unwrap();
    assert_eq!(report["parameter"], "m0");
    assert!((report["value"].as_f64().unwrap() - 5.0).abs() < 1e-3);
    let m = manifest(dir.path());
    assert_eq!(m["command"], "m0-search");
    assert_eq!(m["config"]["kernel"]["gamma"], "0");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn hydro_verdict_over_the_builtin_catalog() {
    let dir = TempDir::new().unwrap();
    let out = kinetic(dir.path(), "[run]\ncommand = hydro-verdict\n[hydro]\ngammas = 1\n", &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "verdicts.csv");
    assert!(csv.starts_with("scenario,gamma,verdict,critical_gamma\n"));
    let smooth = csv.lines().find(|l| l.starts_with("smooth,")).unwrap();
    assert!(smooth.starts_with("smooth,1,excluded,1.7320508"), "{smooth}");
    assert!(!csv.contains('\r'));
}

#[test]
fn malformed_configs_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let out = kinetic(dir.path(), "", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let out = kinetic(dir.path(), "[run]\ncommand = m0-search\n[kernel\ngamma = 0\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = kinetic(dir.path(), "[run]\ncommand = m0-search\n[kernel]\ngamma = 0\nspeed = 3\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("speed"));
}

#[test]
fn infeasible_delta_search_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\ncommand = delta-search\n[kernel]\noperator = landau\ngamma = 0\n[search]\nm = 2.5\n";
    let out = kinetic(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(manifest(dir.path())["exit_code"], 2);
    let cfg = "[run]\ncommand = delta-search\n[kernel]\noperator = landau\ngamma = 0\n[search]\nm = 6\n";
    let out = kinetic(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "delta.json")).unwrap();
    assert!(report["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn seeded_sweeps_are_byte_identical() {
    let cfg = "[run]\ncommand = barrier-check\n[kernel]\noperator = landau\ngamma = -3\n[barrier]\nm = 6\nsamples = 3\n";
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(kinetic(a.path(), cfg, &["--seed", "42"]).status.code(), Some(0));
    assert_eq!(kinetic(b.path(), cfg, &["--seed", "42", "--threads", "1"]).status.code(), Some(0));
    for name in ["contact.csv", "contact.json"] {
        assert_eq!(read(a.path(), name), read(b.path(), name));
    }
    assert_eq!(manifest(a.path())["seed"], 42);
}

#[test]
fn landau_eval_annihilates_a_maxwellian() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\ncommand = landau-eval\n[kernel]\ngamma = -3\n[field]\ntype = maxwellian\nrho = 2\nu = 0.5 0 0\ntheta = 0.8\npoints = 0 0 0; 1 1 0\n";
    let out = kinetic(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "values.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("vx,vy,vz,value,scale"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[3].abs() <= 1e-3 * cols[4]);
    }
}

#[test]
fn homog_run_writes_log_and_grid() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\ncommand = homog-run\n[kernel]\ngamma = -3\n[field]\ntype = gaussian-mixture\nbumps = 1 0.3 0 0 1\n[homog]\nn = 16\nv_max = 8\nt_end = 0.05\ncontact_c = 100\n";
    let out = kinetic(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "summary.json")).unwrap();
    assert_eq!(summary["status"], "completed");
    assert_eq!(summary["gronwall_holds"], true);
    let log = read(dir.path(), "run.csv");
    assert!(log.starts_with("t,norm_m,norm_dpg,mass,px,py,pz,energy,negmax\n"));
    let grid = std::fs::read(dir.path().join("out").join("final.grid")).unwrap();
    assert_eq!(grid.len(), 32 + 8 * 16 * 16 * 16);
}

#[test]
fn aborted_runs_keep_their_partial_log() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\ncommand = homog-run\n[kernel]\ngamma = -3\n[field]\ntype = gaussian-mixture\nbumps = 1 0.3 0 0 1\n[homog]\nn = 8\nv_max = 10\nt_end = 0.05\n";
    let out = kinetic(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "summary.json")).unwrap();
    assert!(summary["status"]["reason"].as_str().unwrap().contains("negative"));
    assert!(read(dir.path(), "run.csv").lines().count() >= 2);
}
