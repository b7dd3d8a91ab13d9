//! Contact-point estimate: Q(f, f)(v0) against b(v0)^2 <v0>^{d+gamma}
//! whenever f <= b touches the barrier at v0.

use std::sync::Arc;

use serde::Serialize;

use crate::barrier::{Barrier, BarrierField};
use crate::boltzmann::q_boltzmann_carleman;
use crate::error::{KineticError, Result};
use crate::field::{bracket, norm, RadialWindow, VelocityField, Windowed};
use crate::kernel::{KernelSpec, OperatorKind};
use crate::landau::q_landau;
use crate::norm::sampling_grid;
use crate::rng::SplitMix64;
use crate::scheme::QuadratureScheme;

/// Relative tolerance of the contact condition f(v0) = b(v0).
pub const CONTACT_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct ContactConfiguration {
    pub barrier: Barrier,
    pub field: Arc<dyn VelocityField>,
    pub v0: Vec<f64>,
}

impl ContactConfiguration {
    pub fn new(barrier: Barrier, field: Arc<dyn VelocityField>, v0: &[f64]) -> Self {
        ContactConfiguration { barrier, field, v0: v0.to_vec() }
    }

    /// Sampled check of 0 <= f <= b and f(v0) = b(v0).
    pub fn validate(&self, q: &QuadratureScheme) -> Result<()> {
        let d = self.field.dim();
        if self.v0.len() != d {
            return Err(KineticError::Configuration(format!("v0 must have dimension {d}")));
        }
        let b0 = self.barrier.value(&self.v0);
        let f0 = self.field.eval(&self.v0);
        if !b0.is_finite() || (f0 - b0).abs() > CONTACT_TOL * b0 {
            return Err(KineticError::Configuration(format!(
                "v0 is not a contact point: f(v0) = {f0}, b(v0) = {b0}"
            )));
        }
        let mut pts = sampling_grid(d, q);
        let r0 = norm(&self.v0);
        if r0 > 0.0 {
            let n = 256;
            for k in 1..=n {
                let s = 2.0 * r0 * k as f64 / n as f64;
                pts.push(self.v0.iter().map(|x| x * s / r0).collect());
            }
        }
        for v in &pts {
            let fv = self.field.eval(v);
            if !(fv >= 0.0) {
                return Err(KineticError::Configuration(format!("field is negative or NaN at {v:?}: {fv}")));
            }
            let bv = self.barrier.value(v);
            if fv > bv * (1.0 + CONTACT_TOL) {
                return Err(KineticError::Configuration(format!(
                    "field exceeds the barrier at {v:?}: f = {fv}, b = {bv}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactEstimate {
    /// Q(f, f)(v0)
    pub lhs: f64,
    /// b(v0)^2 <v0>^{d+gamma}
    pub bound_unit: f64,
}

impl ContactEstimate {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.bound_unit
    }
}

pub fn contact_estimate_check(
    cfg: &ContactConfiguration,
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<ContactEstimate> {
    q.validate()?;
    cfg.validate(q)?;
    let f: &dyn VelocityField = cfg.field.as_ref();
    let lhs = match k.operator {
        OperatorKind::Landau => q_landau(f, &cfg.v0, k, q)?,
        OperatorKind::Boltzmann => q_boltzmann_carleman(f, &cfg.v0, k, q)?,
    };
    let b0 = cfg.barrier.value(&cfg.v0);
    let bound_unit = b0 * b0 * bracket(&cfg.v0).powf(k.dim as f64 + k.gamma);
    Ok(ContactEstimate { lhs, bound_unit })
}

/// Ratios from a seeded family of contact configurations and their maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactSweep {
    pub seed: u64,
    pub ratios: Vec<f64>,
    pub contact_points: Vec<Vec<f64>>,
    pub measured_c: f64,
}

/// Each sample draws v0 with |v0| in [1, 4] along a random direction and
/// f = b times a window that equals 1 on a shell containing |v0|.
pub fn contact_sweep(
    barrier: &Barrier,
    k: &KernelSpec,
    q: &QuadratureScheme,
    seed: u64,
    samples: usize,
) -> Result<ContactSweep> {
    let d = k.dim;
    let mut rng = SplitMix64::new(seed);
    let mut ratios = Vec::with_capacity(samples);
    let mut contact_points = Vec::with_capacity(samples);
    let cap = 0.9 * q.outer_radius;
    for _ in 0..samples {
        let r0 = rng.uniform(1.0, 4.0f64.min(0.5 * cap));
        let dir = rng.unit_vector(d);
        let v0: Vec<f64> = dir.iter().map(|x| x * r0).collect();
        let fall_start = rng.uniform(r0 + 0.25, cap.max(r0 + 0.5));
        let fall = Some((fall_start, fall_start + rng.uniform(0.25, 2.0)));
        let rise = if rng.next_f64() < 0.5 {
            let a = rng.uniform(0.0, 0.5 * r0);
            Some((a, a + rng.uniform(0.1, 0.5 * r0)))
        } else {
            None
        };
        let field = Windowed::new(BarrierField { barrier: *barrier, dim: d }, RadialWindow { rise, fall });
        let cfg = ContactConfiguration::new(*barrier, Arc::new(field), &v0);
        let est = contact_estimate_check(&cfg, k, q)?;
        ratios.push(est.ratio());
        contact_points.push(v0);
    }
    let measured_c = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ContactSweep { seed, ratios, contact_points, measured_c })
}
