use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kinetic_core::boltzmann::{q_boltzmann_carleman_detailed, q_boltzmann_sigma_detailed};
use kinetic_core::field::{GaussianBump, GaussianMixture};
use kinetic_core::homog::solver::homog_run_with_state;
use kinetic_core::hydro::scenario::{builtin_catalog, load_catalog, write_verdict_csv};
use kinetic_core::landau::q_landau_detailed;
use kinetic_core::verify::contact::contact_sweep;
use kinetic_core::*;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Files written by a command, relative to the output directory, and a
/// short machine-readable summary for the manifest.
pub struct Outcome {
    pub artifacts: Vec<String>,
    pub summary: Value,
}

pub fn run(cfg: &RunConfig, seed: u64, out: &Path) -> Result<Outcome> {
    match cfg.command {
        Command::LandauEval => operator_eval(cfg, out, OperatorKind::Landau),
        Command::BoltzmannEval => operator_eval(cfg, out, OperatorKind::Boltzmann),
        Command::BarrierCheck => barrier_check(cfg, seed, out),
        Command::DeltaSearch => delta_search(cfg, out),
        Command::M0Search => m0_search(cfg, out),
        Command::HomogRun => homog(cfg, out),
        Command::HydroVerdict => hydro_verdict(cfg, out),
    }
}

fn kernel(cfg: &RunConfig, operator: OperatorKind) -> Result<KernelSpec> {
    let dim = cfg.get_or("kernel", "dim", 3usize)?;
    let gamma = cfg.require("kernel", "gamma")?;
    Ok(match operator {
        OperatorKind::Landau => KernelSpec::landau(dim, gamma)?,
        OperatorKind::Boltzmann => {
            let b = match cfg.raw("kernel", "b").unwrap_or("constant") {
                "constant" => AngularKernel::Constant(cfg.get_or("kernel", "b_value", 1.0)?),
                "cos-squared-half" => AngularKernel::CosSquaredHalf,
                "non-cutoff" => AngularKernel::NonCutoff { s: cfg.require("kernel", "s")? },
                "sin-power" => AngularKernel::SinPower { exponent: cfg.require("kernel", "exponent")? },
                other => return Err(CliError::Invalid(format!("unknown angular kernel {other:?}"))),
            };
            KernelSpec::boltzmann(dim, gamma, b)?
        }
    })
}

fn operator_from_config(cfg: &RunConfig) -> Result<OperatorKind> {
    match cfg.raw("kernel", "operator").unwrap_or("landau") {
        "landau" => Ok(OperatorKind::Landau),
        "boltzmann" => Ok(OperatorKind::Boltzmann),
        other => Err(CliError::Invalid(format!("unknown operator {other:?}"))),
    }
}

fn quadrature(cfg: &RunConfig) -> Result<QuadratureScheme> {
    let d = QuadratureScheme::default();
    let q = QuadratureScheme {
        outer_radius: cfg.get_or("quadrature", "outer_radius", d.outer_radius)?,
        polar_radius: cfg.get_or("quadrature", "polar_radius", d.polar_radius)?,
        radial_nodes: cfg.get_or("quadrature", "radial_nodes", d.radial_nodes)?,
        angular_nodes: cfg.get_or("quadrature", "angular_nodes", d.angular_nodes)?,
        hyperplane_nodes: cfg.get_or("quadrature", "hyperplane_nodes", d.hyperplane_nodes)?,
        regularization_radius: cfg.get_or("quadrature", "regularization_radius", d.regularization_radius)?,
        rel_tol: cfg.get_or("quadrature", "rel_tol", d.rel_tol)?,
    };
    q.validate()?;
    Ok(q)
}

fn field(cfg: &RunConfig, dim: usize) -> Result<Box<dyn VelocityField>> {
    match cfg.raw("field", "type").unwrap_or("maxwellian") {
        "maxwellian" => {
            let u = cfg.vector("field", "u")?.unwrap_or_else(|| vec![0.0; dim]);
            Ok(Box::new(Maxwellian::new(cfg.get_or("field", "rho", 1.0)?, &u, cfg.get_or("field", "theta", 1.0)?)?))
        }
        "gaussian-mixture" => {
            let rows = cfg.rows("field", "bumps")?.ok_or_else(|| CliError::Invalid("missing [field] bumps".into()))?;
            let bumps = rows
                .into_iter()
                .map(|r| {
                    if r.len() != dim + 2 {
                        return Err(CliError::Invalid(format!("a bump needs weight, {dim} centre coordinates and width")));
                    }
                    Ok(GaussianBump { weight: r[0], center: r[1..=dim].to_vec(), width: r[dim + 1] })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Box::new(GaussianMixture::new(bumps)?))
        }
        other => Err(CliError::Invalid(format!("unknown field type {other:?}"))),
    }
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn write_json(out: &Path, name: &str, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(out.join(name), text + "\n")?;
    Ok(())
}

fn operator_eval(cfg: &RunConfig, out: &Path, operator: OperatorKind) -> Result<Outcome> {
    let k = kernel(cfg, operator)?;
    let q = quadrature(cfg)?;
    let f = field(cfg, k.dim)?;
    let points = cfg.rows("field", "points")?.unwrap_or_else(|| vec![vec![0.0; k.dim]]);
    let carleman = match cfg.raw("field", "form").unwrap_or("sigma") {
        "sigma" => false,
        "carleman" => true,
        other => return Err(CliError::Invalid(format!("unknown Boltzmann form {other:?}"))),
    };
    let mut w = create(out, "values.csv")?;
    let axes = ["vx", "vy", "vz"];
    writeln!(w, "{},value,scale", axes[..k.dim].join(","))?;
    for v in &points {
        let (value, scale) = match operator {
            OperatorKind::Landau => {
                let e = q_landau_detailed(f.as_ref(), v, &k, &q)?;
                (e.value, e.scale)
            }
            OperatorKind::Boltzmann => {
                let e = if carleman {
                    q_boltzmann_carleman_detailed(f.as_ref(), v, &k, &q)?
                } else {
                    q_boltzmann_sigma_detailed(f.as_ref(), v, &k, &q)?
                };
                (e.value, e.scale)
            }
        };
        let coords: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
        writeln!(w, "{},{value:e},{scale:e}", coords.join(","))?;
    }
    w.flush()?;
    Ok(Outcome { artifacts: vec!["values.csv".into()], summary: json!({ "points": points.len() }) })
}

fn barrier_check(cfg: &RunConfig, seed: u64, out: &Path) -> Result<Outcome> {
    let k = kernel(cfg, operator_from_config(cfg)?)?;
    let q = quadrature(cfg)?;
    let barrier = make_barrier(cfg.require("barrier", "m")?, cfg.get_or("barrier", "alpha", 1.0)?)?;
    let samples = cfg.get_or("barrier", "samples", 8usize)?;
    let sweep = contact_sweep(&barrier, &k, &q, seed, samples)?;
    let mut w = create(out, "contact.csv")?;
    writeln!(w, "sample,ratio,v0")?;
    for (i, (r, v)) in sweep.ratios.iter().zip(&sweep.contact_points).enumerate() {
        let v: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
        writeln!(w, "{i},{r:e},{}", v.join(" "))?;
    }
    w.flush()?;
    write_json(out, "contact.json", &sweep)?;
    Ok(Outcome {
        artifacts: vec!["contact.csv".into(), "contact.json".into()],
        summary: json!({ "measured_c": sweep.measured_c }),
    })
}

fn delta_search(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let operator = operator_from_config(cfg)?;
    let k = kernel(cfg, operator)?;
    let m: f64 = cfg.require("search", "m")?;
    let report = match operator {
        OperatorKind::Landau => landau_delta_search(m, k.dim, k.gamma, cfg.get_or("search", "rel_tol", 1e-6)?)?,
        OperatorKind::Boltzmann => boltzmann_delta_search(m, &k, &quadrature(cfg)?)?,
    };
    write_json(out, "delta.json", &report)?;
    Ok(Outcome { artifacts: vec!["delta.json".into()], summary: json!({ "delta": report.value }) })
}

fn m0_search(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let k = kernel(cfg, OperatorKind::Boltzmann)?;
    let report = boltzmann_m0_search(&k, &quadrature(cfg)?)?;
    write_json(out, "m0.json", &report)?;
    Ok(Outcome { artifacts: vec!["m0.json".into()], summary: json!({ "m0": report.value }) })
}

fn homog(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let k = kernel(cfg, OperatorKind::Landau)?;
    let defaults = HomogSettings::default();
    let settings = HomogSettings {
        t_end: cfg.require("homog", "t_end")?,
        cfl: cfg.get_or("homog", "cfl", defaults.cfl)?,
        weight: cfg.get_or("homog", "weight", defaults.weight)?,
        max_steps: cfg.get_or("homog", "max_steps", defaults.max_steps)?,
    };
    let contact_c: Option<f64> = cfg.get("homog", "contact_c")?;
    let f0 = match cfg.raw("homog", "input") {
        Some(path) => GridField::read_binary(File::open(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?)?,
        None => {
            let f = field(cfg, k.dim)?;
            GridField::sample(f.as_ref(), cfg.get_or("homog", "n", 32usize)?, cfg.require("homog", "v_max")?)?
        }
    };
    let (log, last) = homog_run_with_state(&f0, &k, &settings)?;
    let mut w = create(out, "run.csv")?;
    log.write_csv(&mut w)?;
    w.flush()?;
    let mut g = create(out, "final.grid")?;
    last.write_binary(&mut g)?;
    g.flush()?;
    let gronwall = contact_c.map(|c| gronwall_check(&log.records, c)).transpose()?;
    let status = match &log.status {
        RunStatus::Completed => json!("completed"),
        RunStatus::Aborted { time, reason } => json!({ "aborted_at": time, "reason": reason }),
    };
    let summary = json!({
        "status": status,
        "steps": log.records.len() - 1,
        "final_time": last.time,
        "conservation_drift": log.conservation_drift(),
        "gronwall_holds": gronwall.as_ref().map(|g| g.holds),
        "gronwall_worst_margin": gronwall.as_ref().map(|g| g.margins.iter().cloned().fold(f64::INFINITY, f64::min)),
    });
    write_json(out, "summary.json", &summary)?;
    let artifacts = vec!["run.csv".into(), "final.grid".into(), "summary.json".into()];
    if let RunStatus::Aborted { time, reason } = log.status {
        return Err(KineticError::RunAborted { time, reason }.into());
    }
    Ok(Outcome { artifacts, summary })
}

fn hydro_verdict(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let catalog = match cfg.raw("hydro", "catalog") {
        Some(path) => load_catalog(Path::new(path))?,
        None => builtin_catalog(),
    };
    let gammas = cfg.vector("hydro", "gammas")?.unwrap_or_else(|| vec![-3.0, -2.0, -1.0, 0.0, 1.0]);
    let mut verdicts = Vec::with_capacity(catalog.len() * gammas.len());
    for &gamma in &gammas {
        for sc in &catalog {
            verdicts.push(scenario_verdict(sc, gamma)?);
        }
    }
    write_verdict_csv(create(out, "verdicts.csv")?, &verdicts)?;
    let open = verdicts.iter().filter(|v| v.verdict == Verdict::Open).count();
    Ok(Outcome { artifacts: vec!["verdicts.csv".into()], summary: json!({ "rows": verdicts.len(), "open": open }) })
}
