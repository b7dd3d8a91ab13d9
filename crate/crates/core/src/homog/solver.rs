//! Explicit midpoint stepping of the space-homogeneous Landau equation
//! d_t f = a_bar : D^2 f + c_bar f on a periodic velocity grid.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::homog::grid::GridField;
use crate::homog::spectral::{component, LandauConvolution, COMPONENTS};
use crate::homog::stencil::CentralDifferences;
use crate::kernel::{KernelSpec, OperatorKind};

/// Negative values down to this fraction of the maximum are clipped to 0.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Boundary-ring values allowed relative to the maximum.
pub const CONTAINMENT_TOL: f64 = 1e-8;
/// Steps shorter than this abort the run.
pub const MIN_TIME_STEP: f64 = 1e-14;
/// Values below this fraction of the maximum are floored inside ln f.
pub const LOG_FLOOR: f64 = 1e-200;
/// Faces touching values below this fraction of the maximum are upwinded.
pub const UPWIND_BELOW: f64 = 1e-6;

/// Run parameters: the grid itself plays the role of the quadrature scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogSettings {
    pub t_end: f64,
    pub cfl: f64,
    /// Weight exponent m of the logged norm ||f||_{L^inf_m}.
    pub weight: f64,
    /// Hard cap on the number of steps.
    pub max_steps: usize,
}

impl Default for HomogSettings {
    fn default() -> Self {
        HomogSettings { t_end: 1.0, cfl: 0.25, weight: 6.0, max_steps: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub t: f64,
    pub norm_m: f64,
    pub norm_dpg: f64,
    pub mass: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
    /// Largest clipped negative value in the step that produced this record.
    pub negmax: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RunStatus {
    Completed,
    Aborted { time: f64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub weight: f64,
    pub dpg: f64,
    pub records: Vec<RunRecord>,
    pub status: RunStatus,
    /// Per step: max f after the step minus (1 + dt max c_bar) max f before it.
    pub max_growth_excess: Vec<f64>,
}

impl RunLog {
    pub fn is_complete(&self) -> bool {
        self.status == RunStatus::Completed
    }

    /// The log as a result: aborted runs become [`KineticError::RunAborted`].
    pub fn into_result(self) -> Result<RunLog> {
        match &self.status {
            RunStatus::Completed => Ok(self),
            RunStatus::Aborted { time, reason } => Err(KineticError::RunAborted { time: *time, reason: reason.clone() }),
        }
    }

    /// Largest relative drift of mass, energy and |momentum| (the latter
    /// relative to sqrt(mass * energy)).
    pub fn conservation_drift(&self) -> f64 {
        let first = match self.records.first() {
            Some(r) => r,
            None => return 0.0,
        };
        if first.mass == 0.0 {
            return 0.0;
        }
        let p_scale = (first.mass * first.energy).sqrt();
        self.records
            .iter()
            .map(|r| {
                let dm = (r.mass - first.mass).abs() / first.mass;
                let de = (r.energy - first.energy).abs() / first.energy;
                let dp = (0..3).map(|i| (r.momentum[i] - first.momentum[i]).abs()).fold(0.0, f64::max) / p_scale;
                dm.max(de).max(dp)
            })
            .fold(0.0, f64::max)
    }

    /// CSV with columns t,norm_m,norm_dpg,mass,px,py,pz,energy,negmax.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,norm_m,norm_dpg,mass,px,py,pz,energy,negmax")?;
        for r in &self.records {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, r.norm_m, r.norm_dpg, r.mass, r.momentum[0], r.momentum[1], r.momentum[2], r.energy, r.negmax
            )?;
        }
        Ok(())
    }

    pub fn read_csv(text: &str) -> Result<Vec<RunRecord>> {
        let mut lines = text.lines();
        match lines.next() {
            Some("t,norm_m,norm_dpg,mass,px,py,pz,energy,negmax") => {}
            other => return Err(KineticError::Format(format!("unexpected run log header {other:?}"))),
        }
        lines
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                let vals: std::result::Result<Vec<f64>, _> = l.split(',').map(|s| s.trim().parse::<f64>()).collect();
                let vals = vals.map_err(|e| KineticError::Format(format!("line {}: {e}", i + 2)))?;
                if vals.len() != 9 {
                    return Err(KineticError::Format(format!("line {}: expected 9 columns", i + 2)));
                }
                Ok(RunRecord {
                    t: vals[0],
                    norm_m: vals[1],
                    norm_dpg: vals[2],
                    mass: vals[3],
                    momentum: [vals[4], vals[5], vals[6]],
                    energy: vals[7],
                    negmax: vals[8],
                })
            })
            .collect()
    }
}

/// Grid operator Q(f) = a_bar : D^2 f + c_bar f in the conservative
/// entropic form Q_i = D . J_i with
/// J_i = sum_j a(v_i - v_j) f_i f_j (D ln f_i - D ln f_j) h^3 = f_i u_i.
/// a(z) z = 0 makes sum_i v_i . J_i vanish, so mass, momentum and energy
/// are conserved; D ln f is exact for Maxwellians, so they are stationary.
/// In the far tail the faces are upwinded to keep values nonnegative.
pub struct LandauGridOperator {
    conv: LandauConvolution,
    diff: CentralDifferences,
}

/// Q(f) on the grid and the largest Frobenius norm of a_bar and the largest c_bar.
pub struct GridEvaluation {
    pub q: Vec<f64>,
    pub a_max: f64,
    pub c_max: f64,
    /// max_i sum_k |u_k| of the transport velocity.
    pub u_max: f64,
}

impl LandauGridOperator {
    pub fn new(grid: &GridField, gamma: f64) -> Result<Self> {
        Ok(LandauGridOperator {
            conv: LandauConvolution::new(grid.n, grid.h, gamma)?,
            diff: CentralDifferences::new(grid.n, grid.h),
        })
    }

    pub fn evaluate(&self, f: &[f64]) -> GridEvaluation {
        let a = self.conv.a_bar(f);
        let max = f.iter().cloned().fold(0.0, f64::max);
        let floor = f64::MIN_POSITIVE.max(LOG_FLOOR * max);
        let g = self.diff.log_gradient(f, floor);
        let fg: Vec<Vec<f64>> = g.iter().map(|gl| gl.iter().zip(f).map(|(x, y)| x * y).collect()).collect();
        let conv = self.conv.apply_to_vector(&fg);
        let velocity: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                (0..f.len())
                    .map(|idx| (0..3).map(|l| a[component(k, l)][idx] * g[l][idx]).sum::<f64>() - conv[k][idx])
                    .collect()
            })
            .collect();
        let q = self.diff.limited_divergence(f, &velocity, UPWIND_BELOW * max);
        let c = self.diff.double_divergence_neg(&a);
        let mut a_max: f64 = 0.0;
        for idx in 0..f.len() {
            let frob: f64 = COMPONENTS
                .iter()
                .enumerate()
                .map(|(comp, &(i, j))| if i == j { 1.0 } else { 2.0 } * a[comp][idx].powi(2))
                .sum();
            a_max = a_max.max(frob.sqrt());
        }
        let c_max = c.iter().cloned().fold(0.0, f64::max);
        let u_max = (0..f.len())
            .map(|idx| velocity.iter().map(|uk| uk[idx].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        GridEvaluation { q, a_max, c_max, u_max }
    }
}

fn record(grid: &GridField, values: &[f64], t: f64, weight: f64, dpg: f64, negmax: f64) -> RunRecord {
    let cell = grid.cell_volume();
    let mut norm_m: f64 = 0.0;
    let mut norm_dpg: f64 = 0.0;
    let mut mass = Vec::with_capacity(values.len());
    let mut px = Vec::with_capacity(values.len());
    let mut py = Vec::with_capacity(values.len());
    let mut pz = Vec::with_capacity(values.len());
    let mut en = Vec::with_capacity(values.len());
    let mut v = [0.0; 3];
    for (idx, &f) in values.iter().enumerate() {
        grid.node_into(idx, &mut v);
        let s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let br = 1.0 + s;
        norm_m = norm_m.max(br.powf(0.5 * weight) * f);
        norm_dpg = norm_dpg.max(br.powf(0.5 * dpg) * f);
        mass.push(f);
        px.push(v[0] * f);
        py.push(v[1] * f);
        pz.push(v[2] * f);
        en.push(s * f);
    }
    use crate::quadrature::pairwise_sum;
    RunRecord {
        t,
        norm_m,
        norm_dpg,
        mass: cell * pairwise_sum(&mass),
        momentum: [cell * pairwise_sum(&px), cell * pairwise_sum(&py), cell * pairwise_sum(&pz)],
        energy: cell * pairwise_sum(&en),
        negmax,
    }
}

/// Clips tiny negative values; returns the largest clipped magnitude or the
/// offending value when it exceeds the tolerance.
fn clip_negative(values: &mut [f64]) -> std::result::Result<f64, f64> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let mut negmax: f64 = 0.0;
    for x in values.iter_mut() {
        if *x < 0.0 {
            if *x < -NEGATIVITY_TOL * max {
                return Err(*x);
            }
            negmax = negmax.max(-*x);
            *x = 0.0;
        }
    }
    Ok(negmax)
}

pub fn homog_run(f0: &GridField, k: &KernelSpec, settings: &HomogSettings) -> Result<RunLog> {
    Ok(homog_run_with_state(f0, k, settings)?.0)
}

/// As [`homog_run`], also returning the last accepted grid state.
pub fn homog_run_with_state(f0: &GridField, k: &KernelSpec, settings: &HomogSettings) -> Result<(RunLog, GridField)> {
    if k.operator != OperatorKind::Landau {
        return Err(KineticError::Unsupported("the grid solver integrates the Landau equation only".into()));
    }
    if k.dim != 3 || f0.dim != 3 {
        return Err(KineticError::Unsupported("the grid solver is three-dimensional".into()));
    }
    if !(settings.cfl > 0.0 && settings.cfl < 1.0) {
        return Err(KineticError::Argument(format!("cfl must lie in (0, 1), got {}", settings.cfl)));
    }
    if !(settings.t_end > f0.time) || !settings.t_end.is_finite() {
        return Err(KineticError::Argument(format!("t_end must exceed the initial time {}", f0.time)));
    }
    if !(settings.weight >= 0.0) {
        return Err(KineticError::Argument("weight exponent must be nonnegative".into()));
    }
    f0.validate()?;
    let op = LandauGridOperator::new(f0, k.gamma)?;
    let dpg = 3.0 + k.gamma;
    let mut f = f0.values.clone();
    let mut t = f0.time;
    let mut log = RunLog {
        weight: settings.weight,
        dpg,
        records: vec![record(f0, &f, t, settings.weight, dpg, 0.0)],
        status: RunStatus::Completed,
        max_growth_excess: Vec::new(),
    };
    let h2 = f0.h * f0.h;
    let mut steps = 0;
    while t < settings.t_end {
        if steps >= settings.max_steps {
            log.status = RunStatus::Aborted { time: t, reason: format!("step limit {} reached", settings.max_steps) };
            return Ok((log, GridField { values: f, time: t, ..f0.clone() }));
        }
        let max_before = f.iter().cloned().fold(0.0, f64::max);
        if max_before == 0.0 {
            // the zero field is stationary
            t = settings.t_end;
            log.records.push(record(f0, &f, t, settings.weight, dpg, 0.0));
            break;
        }
        let stage1 = op.evaluate(&f);
        // the transport limit only binds when upwinded faces see fast tails
        let mut dt = (settings.cfl * h2 / (6.0 * stage1.a_max)).min(settings.cfl * f0.h / stage1.u_max);
        if t + dt > settings.t_end {
            dt = settings.t_end - t;
        }
        if !(dt >= MIN_TIME_STEP) {
            log.status = RunStatus::Aborted { time: t, reason: format!("time step {dt:e} underflowed") };
            return Ok((log, GridField { values: f, time: t, ..f0.clone() }));
        }
        let half: Vec<f64> = f.iter().zip(&stage1.q).map(|(x, q)| x + 0.5 * dt * q).collect();
        let stage2 = op.evaluate(&half);
        let mut next: Vec<f64> = f.iter().zip(&stage2.q).map(|(x, q)| x + dt * q).collect();
        let negmax = match clip_negative(&mut next) {
            Ok(v) => v,
            Err(bad) => {
                log.status = RunStatus::Aborted {
                    time: t + dt,
                    reason: format!("negative value {bad:e} exceeds {NEGATIVITY_TOL:e} of the maximum"),
                };
                return Ok((log, GridField { values: f, time: t, ..f0.clone() }));
            }
        };
        t += dt;
        steps += 1;
        let max_after = next.iter().cloned().fold(0.0, f64::max);
        log.max_growth_excess.push(max_after - (1.0 + dt * stage1.c_max) * max_before);
        let grid_now = GridField { values: next, time: t, ..f0.clone() };
        if grid_now.boundary_max() > CONTAINMENT_TOL * max_after {
            log.status = RunStatus::Aborted {
                time: t,
                reason: format!("boundary values reach {:e} of the maximum", grid_now.boundary_max() / max_after),
            };
            return Ok((log, GridField { values: f, time: t, ..f0.clone() }));
        }
        f = grid_now.values;
        log.records.push(record(f0, &f, t, settings.weight, dpg, negmax));
    }
    Ok((log, GridField { values: f, time: t, ..f0.clone() }))
}
