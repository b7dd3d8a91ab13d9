//! Boltzmann operator in the sigma representation and in Carleman
//! coordinates (Q = Q_s + Q_ns).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KineticError, Result};
use crate::field::VelocityField;
use crate::kernel::{singular_head_integral, KernelSpec, OperatorKind};
use crate::landau::{check_operator_inputs, riesz_potential};
use crate::quadrature::{
    dot3, graded_toward, orthonormal_complement, pairwise_sum, to_point, CenteredBallRule, GaussRule,
    Point, SphereRule,
};
use crate::scheme::QuadratureScheme;

/// Pre- and post-collisional velocities for one (v, v_*, sigma) triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionGeometry {
    pub v: Vec<f64>,
    pub v_star: Vec<f64>,
    pub v_prime: Vec<f64>,
    pub v_star_prime: Vec<f64>,
    pub sigma: Vec<f64>,
    /// |v - v_*|
    pub r: f64,
    /// Deviation angle; `None` when v = v_* and the angle is undefined.
    pub theta: Option<f64>,
}

/// v' = (v + v_*)/2 + |v - v_*| sigma / 2, v'_* = (v + v_*)/2 - |v - v_*| sigma / 2.
pub fn post_collision_map(v: &[f64], v_star: &[f64], sigma: &[f64]) -> Result<CollisionGeometry> {
    let d = v.len();
    if v_star.len() != d || sigma.len() != d {
        return Err(KineticError::Argument("v, v_* and sigma must share a dimension".into()));
    }
    let sn: f64 = sigma.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (sn - 1.0).abs() > 1e-12 {
        return Err(KineticError::Argument(format!("sigma must be a unit vector, |sigma| = {sn}")));
    }
    let rel: Vec<f64> = v.iter().zip(v_star).map(|(a, b)| a - b).collect();
    let r = rel.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mid: Vec<f64> = v.iter().zip(v_star).map(|(a, b)| 0.5 * (a + b)).collect();
    let v_prime: Vec<f64> = mid.iter().zip(sigma).map(|(m, s)| m + 0.5 * r * s).collect();
    let v_star_prime: Vec<f64> = mid.iter().zip(sigma).map(|(m, s)| m - 0.5 * r * s).collect();
    let theta = if r > 0.0 {
        let c: f64 = rel.iter().zip(sigma).map(|(a, s)| a * s).sum::<f64>() / r;
        Some(c.clamp(-1.0, 1.0).acos())
    } else {
        None
    };
    Ok(CollisionGeometry {
        v: v.to_vec(),
        v_star: v_star.to_vec(),
        v_prime,
        v_star_prime,
        sigma: sigma.to_vec(),
        r,
        theta,
    })
}

/// Q(f, f)(v) with its pieces and a collision-frequency scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoltzmannEvaluation {
    pub value: f64,
    /// Q_s (Carleman form); equals `value` for the sigma form.
    pub singular: f64,
    /// Q_ns (Carleman form); zero for the sigma form.
    pub nonsingular: f64,
    /// f(v) (f * |.|^gamma)(v) times the angular frequency factor of b.
    pub scale: f64,
}

fn frequency_scale(f: &dyn VelocityField, v: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> f64 {
    f.eval(v) * riesz_potential(f, v, k.gamma, q) * k.frequency_factor()
}

pub fn q_boltzmann_sigma(f: &dyn VelocityField, v: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    Ok(q_boltzmann_sigma_detailed(f, v, k, q)?.value)
}

pub fn q_boltzmann_sigma_detailed(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<BoltzmannEvaluation> {
    check_operator_inputs(f, v, k, q, OperatorKind::Boltzmann)?;
    if !k.is_cutoff() {
        return Err(KineticError::Capability(
            "the sigma representation diverges for non-cutoff kernels; use q_boltzmann_carleman".into(),
        ));
    }
    let d = k.dim;
    let vp = to_point(v);
    let fv = f.eval(v);
    let outer_sphere = SphereRule::new(d, q.angular_nodes).toward_origin(&vp);
    let outer = CenteredBallRule::new(
        d,
        v,
        q.outer_radius,
        q.polar_radius,
        k.gamma,
        q.radial_nodes,
        &outer_sphere,
    );
    let sigma_rule = SphereRule::new(d, q.angular_nodes);
    let b_weights: Vec<f64> = sigma_rule
        .weights
        .iter()
        .zip(&sigma_rule.cos_polar)
        .map(|(w, c)| w * k.b_value((0.5 * (1.0 - c)).max(0.0).sqrt()))
        .collect();
    let b_total = pairwise_sum(&b_weights);
    let terms: Vec<f64> = outer
        .nodes
        .par_iter()
        .map(|node| {
            let vs = node.point;
            let rho = node.radius;
            if rho == 0.0 {
                return 0.0;
            }
            let axis = [-node.direction[0], -node.direction[1], -node.direction[2]];
            let sigmas = sigma_rule.aligned_to(&axis);
            let mid = [0.5 * (vp[0] + vs[0]), 0.5 * (vp[1] + vs[1]), 0.5 * (vp[2] + vs[2])];
            let gains: Vec<f64> = sigmas
                .iter()
                .zip(&b_weights)
                .map(|(s, bw)| {
                    let a = [mid[0] + 0.5 * rho * s[0], mid[1] + 0.5 * rho * s[1], mid[2] + 0.5 * rho * s[2]];
                    let c = [mid[0] - 0.5 * rho * s[0], mid[1] - 0.5 * rho * s[1], mid[2] - 0.5 * rho * s[2]];
                    bw * f.eval(&a[..d]) * f.eval(&c[..d])
                })
                .collect();
            let gain = pairwise_sum(&gains);
            let loss = fv * f.eval(&vs[..d]) * b_total;
            node.weight * (gain - loss)
        })
        .collect();
    let value = pairwise_sum(&terms);
    if !value.is_finite() {
        return Err(KineticError::Evaluation { at: v.to_vec(), value });
    }
    Ok(BoltzmannEvaluation { value, singular: value, nonsingular: 0.0, scale: frequency_scale(f, v, k, q) })
}

pub fn q_boltzmann_carleman(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<f64> {
    Ok(q_boltzmann_carleman_detailed(f, v, k, q)?.value)
}

/// Smallest hyperplane radius resolved by the non-cutoff tau panels,
/// relative to <v>.
const HYPERPLANE_FLOOR: f64 = 1e-5;

pub fn q_boltzmann_carleman_detailed(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<BoltzmannEvaluation> {
    check_operator_inputs(f, v, k, q, OperatorKind::Boltzmann)?;
    let d = k.dim;
    let df = d as f64;
    let grad = f.gradient(v);
    if grad.is_none() && !k.is_cutoff() {
        return Err(KineticError::Capability(
            "non-cutoff Carleman evaluation needs the gradient of f at v".into(),
        ));
    }
    let grad: Option<Point> = grad.map(|g| to_point(g.as_slice()));
    let vp = to_point(v);
    let fv = f.eval(v);
    let h0 = q.regularization_radius;
    let t_floor = HYPERPLANE_FLOOR * crate::field::bracket(v);
    let cutoff = k.is_cutoff();

    let outer_sphere = SphereRule::new(d, q.angular_nodes).toward_origin(&vp);
    let outer = CenteredBallRule::new(
        d,
        v,
        q.outer_radius,
        q.polar_radius,
        k.gamma + 2.0,
        q.radial_nodes,
        &outer_sphere,
    );

    // tau-profile 2^{d-1} tau^{d-2} (1 + tau^2)^{(gamma+2-d)/2} b~(tau / sqrt(1 + tau^2))
    let profile = |tau: f64| {
        let r2 = 1.0 + tau * tau;
        2f64.powi(d as i32 - 1)
            * tau.powi(d as i32 - 2)
            * r2.powf(0.5 * (k.gamma + 2.0 - df))
            * k.b_folded(tau / r2.sqrt())
    };
    let legendre_tau = GaussRule::legendre(q.hyperplane_nodes).mapped(0.0, 1.0);
    let per_panel = (q.hyperplane_nodes / 4).max(4);

    // eta rule on the unit sphere of the hyperplane
    let n_eta = if d == 3 { 2 * q.hyperplane_nodes.div_ceil(2) } else { 2 };
    let eta_angles: Vec<(f64, f64)> = (0..n_eta)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / n_eta as f64;
            (phi.cos(), phi.sin())
        })
        .collect();
    let eta_weight = if d == 3 { 2.0 * PI / n_eta as f64 } else { 1.0 };

    let terms: Vec<f64> = outer
        .nodes
        .par_iter()
        .map(|node| {
            let rho = node.radius;
            if rho == 0.0 {
                return 0.0;
            }
            let f_star = f.eval(&node.point[..d]);
            if f_star == 0.0 {
                return 0.0;
            }
            let (e1, e2) = orthonormal_complement(d, &node.direction);
            let etas: Vec<Point> = if d == 3 {
                eta_angles
                    .iter()
                    .map(|(c, s)| [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]])
                    .collect()
            } else {
                vec![e1, [-e1[0], -e1[1], 0.0]]
            };
            let tau_rule = if cutoff {
                legendre_tau.clone()
            } else {
                let levels = ((rho / t_floor).log2().ceil().max(1.0)) as usize;
                graded_toward(0.0, 1.0, 0.5, levels, per_panel)
            };
            let inner_terms: Vec<f64> = tau_rule
                .nodes
                .iter()
                .zip(&tau_rule.weights)
                .map(|(&tau, &w)| {
                    let t = rho * tau;
                    let diffs: Vec<f64> = etas
                        .iter()
                        .map(|eta| {
                            let p = [vp[0] + t * eta[0], vp[1] + t * eta[1], vp[2] + t * eta[2]];
                            let mut diff = f.eval(&p[..d]) - fv;
                            if t < h0 {
                                if let Some(g) = &grad {
                                    diff -= t * dot3(g, eta);
                                }
                            }
                            diff
                        })
                        .collect();
                    w * profile(tau) * eta_weight * pairwise_sum(&diffs)
                })
                .collect();
            node.weight * f_star * pairwise_sum(&inner_terms) / (rho * rho)
        })
        .collect();
    let singular = pairwise_sum(&terms);
    let potential = riesz_potential(f, v, k.gamma, q);
    let nonsingular = k.c_b * fv * potential;
    let value = singular + nonsingular;
    if !value.is_finite() {
        return Err(KineticError::Evaluation { at: v.to_vec(), value });
    }
    Ok(BoltzmannEvaluation {
        value,
        singular,
        nonsingular,
        scale: fv * potential * k.frequency_factor(),
    })
}

/// The hyperplane integral int |v'-v|^2 |v - v'_*| r^{-3-gamma} B_2 dv',
/// reduced to 2^{d-1} |S^{d-2}| int_0^1 u^d (1+u^2)^{-(d+1)/2} b~(u/sqrt(1+u^2)) du.
/// It does not depend on |v - v'_*|; divergent kernels are rejected.
pub fn kernel_integrability_check(k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    q.validate()?;
    if k.operator != OperatorKind::Boltzmann {
        return Err(KineticError::Argument("integrability check applies to Boltzmann kernels".into()));
    }
    let d = k.dim;
    let df = d as f64;
    let g = |u: f64| u.powi(d as i32) * (1.0 + u * u).powf(-0.5 * (df + 1.0)) * k.b_folded(u / (1.0 + u * u).sqrt());
    let head = singular_head_integral(&g, 0.5)?;
    let body = GaussRule::legendre(q.hyperplane_nodes.max(16)).mapped(0.5, 1.0).integrate(g);
    let value = 2f64.powi(d as i32 - 1) * k.azimuthal_area() * (head + body);
    if !value.is_finite() {
        return Err(KineticError::KernelRejected("hyperplane integral is not finite".into()));
    }
    Ok(value)
}
