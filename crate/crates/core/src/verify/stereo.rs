//! Stereographic change of variables between the collision sphere
//! v' = (v0 + w)/2 + |v0 - w|/2 sigma and the hyperplane through v0
//! orthogonal to v0 - w, projected from w.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{KineticError, Result};
use crate::quadrature::{orthonormal_complement, pairwise_sum, to_point, unit_sphere_area, GaussRule, Point};
use crate::rng::SplitMix64;

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projection of a sphere point v' != w onto the hyperplane:
/// z = w + (v' - w) |v0 - w|^2 / ((v' - w).(v0 - w)).
pub fn stereographic_projection(v0: &[f64], w: &[f64], v_prime: &[f64]) -> Result<Vec<f64>> {
    let a = sub(v_prime, w);
    let b = sub(v0, w);
    let den = dot(&a, &b);
    if !(den > 0.0) {
        return Err(KineticError::Domain("v' coincides with the projection pole w".into()));
    }
    let s = dot(&b, &b) / den;
    Ok(w.iter().zip(&a).map(|(x, y)| x + s * y).collect())
}

/// Inverse map v' = w + ((v0 - w).(z - w)) / |z - w|^2 (z - w).
pub fn inverse_projection(v0: &[f64], w: &[f64], z: &[f64]) -> Vec<f64> {
    let a = sub(z, w);
    let b = sub(v0, w);
    let s = dot(&b, &a) / dot(&a, &a);
    w.iter().zip(&a).map(|(x, y)| x + s * y).collect()
}

/// d sigma / dz = 2^{d-1} |v0 - w|^{d-1} / |z - w|^{2(d-1)}.
pub fn projection_jacobian(v0: &[f64], w: &[f64], z: &[f64]) -> f64 {
    let d = v0.len() as i32;
    let dist = dot(&sub(v0, w), &sub(v0, w)).sqrt();
    let r2 = dot(&sub(z, w), &sub(z, w));
    2f64.powi(d - 1) * dist.powi(d - 1) / r2.powi(d - 1)
}

/// Both sides of int_{S^{d-1}} g(v'(sigma)) d sigma = int_H g(v'(z)) J(z) dz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StereographicComparison {
    pub sphere_mean: f64,
    pub sphere_stderr: f64,
    pub hyperplane_value: f64,
}

/// Monte Carlo over sigma against polar quadrature on the hyperplane.
pub fn stereographic_comparison(
    g: &dyn Fn(&[f64]) -> f64,
    v0: &[f64],
    w: &[f64],
    samples: usize,
    seed: u64,
    hyperplane_nodes: usize,
) -> Result<StereographicComparison> {
    let d = v0.len();
    if !(d == 2 || d == 3) || w.len() != d {
        return Err(KineticError::Argument("v0 and w must share dimension 2 or 3".into()));
    }
    let b = sub(v0, w);
    let dist = dot(&b, &b).sqrt();
    if dist == 0.0 {
        return Err(KineticError::Domain("v0 and w coincide".into()));
    }
    if samples < 2 {
        return Err(KineticError::Argument("need at least two samples".into()));
    }
    let area = unit_sphere_area(d);
    let center: Vec<f64> = v0.iter().zip(w).map(|(x, y)| 0.5 * (x + y)).collect();
    let mut rng = SplitMix64::new(seed);
    let vals: Vec<f64> = (0..samples)
        .map(|_| {
            let s = rng.unit_vector(d);
            let vp: Vec<f64> = center.iter().zip(&s).map(|(c, x)| c + 0.5 * dist * x).collect();
            area * g(&vp)
        })
        .collect();
    let mean = pairwise_sum(&vals) / samples as f64;
    let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (samples - 1) as f64;

    let axis: Point = to_point(&b.iter().map(|x| x / dist).collect::<Vec<_>>());
    let (u1, u2) = orthonormal_complement(d, &axis);
    let n_phi = if d == 3 { 2 * hyperplane_nodes } else { 2 };
    let base = GaussRule::legendre(hyperplane_nodes.max(4));
    let mut terms = Vec::new();
    let mut lo = 1e-6 * dist;
    while lo < 1e6 * dist {
        let panel = base.mapped(lo, 2.0 * lo);
        for (rho, wr) in panel.nodes.iter().zip(&panel.weights) {
            for j in 0..n_phi {
                let (c, s) = if d == 3 {
                    let phi = 2.0 * PI * j as f64 / n_phi as f64;
                    (phi.cos(), phi.sin())
                } else {
                    (if j == 0 { 1.0 } else { -1.0 }, 0.0)
                };
                let z: Vec<f64> = (0..d).map(|i| v0[i] + rho * (c * u1[i] + s * u2[i])).collect();
                let vp = inverse_projection(v0, w, &z);
                let phi_w = if d == 3 { 2.0 * PI / n_phi as f64 } else { 1.0 };
                terms.push(wr * phi_w * rho.powi(d as i32 - 2) * projection_jacobian(v0, w, &z) * g(&vp));
            }
        }
        lo *= 2.0;
    }
    Ok(StereographicComparison {
        sphere_mean: mean,
        sphere_stderr: (var / samples as f64).sqrt(),
        hyperplane_value: pairwise_sum(&terms),
    })
}
