//! The Boltzmann hyperplane integral
//!   int_{(z-e) perp (w-e)} [ (|z|^{-m} r^{2-d+gamma} - |e-w|^{gamma+d} r^{-2(d-1)}) b(|e-z|/r)
//!                            + |z|^{-m} r^{2-d+gamma} b(|e-w|/r) ] dz,   r = |z - w|,
//! and the threshold searches built on it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{KineticError, Result};
use crate::kernel::{AngularKernel, KernelSpec, OperatorKind};
use crate::quadrature::{orthonormal_complement, pairwise_sum, GaussRule, Point};
use crate::scheme::QuadratureScheme;
use crate::verify::report::ThresholdReport;

/// Radial extent of the hyperplane quadrature around the foot point e.
pub const HYPERPLANE_RHO_MIN: f64 = 1e-8;
pub const HYPERPLANE_RHO_MAX: f64 = 1e7;

/// Default ceiling of the m0 search.
pub const M0_CEILING: f64 = 200.0;

/// Largest |w| considered by the delta search.
pub const DELTA_MAX: f64 = 0.5;

/// Number of angles between w and e sampled in [0, pi].
pub const DELTA_DIRECTIONS: usize = 64;

struct HyperplaneRule {
    rho: Vec<f64>,
    rho_w: Vec<f64>,
    n_phi: usize,
}

impl HyperplaneRule {
    fn new(dim: usize, q: &QuadratureScheme) -> Self {
        let per = (q.hyperplane_nodes / 3).max(4);
        let base = GaussRule::legendre(per);
        let mut rho = Vec::new();
        let mut rho_w = Vec::new();
        let ratio: f64 = 2.0;
        let mut lo = HYPERPLANE_RHO_MIN;
        while lo < HYPERPLANE_RHO_MAX {
            let hi = lo * ratio;
            let panel = base.mapped(lo, hi);
            rho.extend(panel.nodes);
            rho_w.extend(panel.weights);
            lo = hi;
        }
        let n_phi = if dim == 3 { 2 * q.hyperplane_nodes } else { 2 };
        HyperplaneRule { rho, rho_w, n_phi }
    }
}

fn check_boltzmann(k: &KernelSpec) -> Result<()> {
    if k.operator != OperatorKind::Boltzmann {
        return Err(KineticError::Argument("hyperplane integral needs a Boltzmann kernel".into()));
    }
    Ok(())
}

/// Left side of the scaled contact inequality at (m, w), with e the first
/// coordinate vector.
pub fn boltzmann_hyperplane_integral(m: f64, w: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    q.validate()?;
    check_boltzmann(k)?;
    let d = k.dim;
    if w.len() != d {
        return Err(KineticError::Argument(format!("w must have dimension {d}")));
    }
    let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(wn < 0.5) {
        return Err(KineticError::Domain(format!(
            "|w| = {wn} must be below 1/2 so v' and v'_* cannot both lie in the small ball"
        )));
    }
    if !(m > 0.0) {
        return Err(KineticError::Argument(format!("m must be positive, got {m}")));
    }
    let rule = HyperplaneRule::new(d, q);
    Ok(integral_with_rule(m, w, k, &rule))
}

fn integral_with_rule(m: f64, w: &[f64], k: &KernelSpec, rule: &HyperplaneRule) -> f64 {
    let d = k.dim;
    let df = d as f64;
    let gamma = k.gamma;
    let mut wp: Point = [0.0; 3];
    wp[..d].copy_from_slice(w);
    let e: Point = [1.0, 0.0, 0.0];
    let ew = [e[0] - wp[0], e[1] - wp[1], e[2] - wp[2]];
    let dist = (ew[0] * ew[0] + ew[1] * ew[1] + ew[2] * ew[2]).sqrt();
    let axis = [ew[0] / dist, ew[1] / dist, ew[2] / dist];
    let (u1, u2) = orthonormal_complement(d, &axis);
    // e . y for y = rho (cos phi u1 + sin phi u2)
    let eu1 = u1[0];
    let eu2 = u2[0];
    let dirs: Vec<(f64, f64)> = if d == 3 {
        (0..rule.n_phi)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / rule.n_phi as f64;
                (phi.cos(), phi.sin())
            })
            .collect()
    } else {
        vec![(1.0, 0.0), (-1.0, 0.0)]
    };
    let phi_w = if d == 3 { 2.0 * PI / rule.n_phi as f64 } else { 1.0 };
    let ln_dist = dist.ln();
    let terms: Vec<f64> = rule
        .rho
        .par_iter()
        .zip(&rule.rho_w)
        .map(|(&rho, &wr)| {
            let r2 = rho * rho + dist * dist;
            let r = r2.sqrt();
            let ln_r = 0.5 * r2.ln();
            let x_ez = rho / r;
            let x_ew = dist / r;
            let b_ez = k.b_value(x_ez);
            let b_ew = k.b_value(x_ew);
            let ratio_term = (df + gamma) * 0.5 * (rho * rho / (dist * dist)).ln_1p();
            let b_exp = (gamma + df) * ln_dist - 2.0 * (df - 1.0) * ln_r;
            let vals: Vec<f64> = dirs
                .iter()
                .map(|(c, s)| {
                    let ey = rho * (c * eu1 + s * eu2);
                    let ln_z = 0.5 * (2.0 * ey + rho * rho).ln_1p();
                    // A - B = -m ln|z| + (d+gamma) ln(r/|e-w|)
                    let diff = -m * ln_z + ratio_term;
                    let bracket = b_exp.exp() * diff.exp_m1();
                    let pos = (-m * ln_z + (2.0 - df + gamma) * ln_r).exp();
                    bracket * b_ez + pos * b_ew
                })
                .collect();
            wr * rho.powi(d as i32 - 2) * phi_w * pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Closed form at w = 0 for b = 1, d = 3: pi [2/(q-1) - 1] with q = (m+1-gamma)/2.
pub fn origin_integral_constant_b(m: f64, gamma: f64) -> f64 {
    let q = 0.5 * (m + 1.0 - gamma);
    PI * (2.0 / (q - 1.0) - 1.0)
}

/// The m -> infinity limit at w = 0: -int b(|e-z|/|z|) |z|^{-2(d-1)} dz.
pub fn origin_integral_limit(k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    check_boltzmann(k)?;
    if !k.is_cutoff() && !matches!(k.b, AngularKernel::SinPower { exponent } if exponent > -(k.dim as f64 - 1.0)) {
        return Ok(f64::NEG_INFINITY);
    }
    let d = k.dim;
    let rule = HyperplaneRule::new(d, q);
    let area = if d == 3 { 2.0 * PI } else { 2.0 };
    let terms: Vec<f64> = rule
        .rho
        .iter()
        .zip(&rule.rho_w)
        .map(|(&rho, &wr)| {
            let z2 = 1.0 + rho * rho;
            let z = z2.sqrt();
            -wr * area * rho.powi(d as i32 - 2) * k.b_value(rho / z) * z2.powf(-(d as f64 - 1.0))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Integrability edge of the positive term at infinity: the origin integral
/// is +infinity for m <= gamma + 1 - beta, where b(x) ~ x^beta near 0.
pub fn m0_lower_edge(k: &KernelSpec) -> f64 {
    let d = k.dim as f64;
    let beta = match (k.b, k.noncutoff_s) {
        (_, Some(s)) => -(d - 1.0) - 2.0 * s,
        (AngularKernel::SinPower { exponent }, None) => exponent,
        _ => 0.0,
    };
    (k.gamma + 1.0 - beta).max(0.0)
}

/// Smallest m (to relative tolerance q.rel_tol) for which the origin
/// hyperplane integral is negative.
pub fn boltzmann_m0_search(k: &KernelSpec, q: &QuadratureScheme) -> Result<ThresholdReport> {
    boltzmann_m0_search_with_ceiling(k, q, M0_CEILING)
}

pub fn boltzmann_m0_search_with_ceiling(k: &KernelSpec, q: &QuadratureScheme, ceiling: f64) -> Result<ThresholdReport> {
    q.validate()?;
    check_boltzmann(k)?;
    crate::boltzmann::kernel_integrability_check(k, q)?;
    let d = k.dim;
    let rule = HyperplaneRule::new(d, q);
    let origin = vec![0.0; d];
    let integral = |m: f64| integral_with_rule(m, &origin, k, &rule);
    let edge = m0_lower_edge(k);
    let mut lo = edge + 1e-3;
    let at_ceiling = integral(ceiling);
    if !(at_ceiling < 0.0) {
        return Err(KineticError::SearchFailed(format!(
            "origin hyperplane integral is {at_ceiling} >= 0 at the ceiling m = {ceiling}"
        )));
    }
    let mut f_lo = integral(lo);
    let mut hi = ceiling;
    let mut f_hi = at_ceiling;
    let grid = |r: ThresholdReport| {
        r.with_grid("hyperplane_nodes", q.hyperplane_nodes as u64)
            .with_grid("radial_panels", (rule.rho.len() / (q.hyperplane_nodes / 3).max(4)) as u64)
            .with_grid("rho_min", HYPERPLANE_RHO_MIN)
            .with_grid("rho_max", HYPERPLANE_RHO_MAX)
            .with_grid("rel_tol", q.rel_tol)
            .with_grid("ceiling", ceiling)
            .with_grid("lower_edge", edge)
    };
    if f_lo < 0.0 {
        let r = ThresholdReport::new("m0", lo).certify("integral at m0", &[lo], f_lo);
        return Ok(grid(r));
    }
    while hi - lo > q.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = integral(mid);
        if f_mid < 0.0 {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let r = ThresholdReport::new("m0", hi)
        .certify("integral below threshold", &[lo], f_lo)
        .certify("integral at threshold", &[hi], f_hi);
    Ok(grid(r))
}

/// Largest delta <= 1/2 such that the hyperplane integral at (m, w) is
/// non-positive for every sampled w with |w| <= delta.
pub fn boltzmann_delta_search(m: f64, k: &KernelSpec, q: &QuadratureScheme) -> Result<ThresholdReport> {
    q.validate()?;
    check_boltzmann(k)?;
    let d = k.dim;
    let rule = HyperplaneRule::new(d, q);
    let origin = vec![0.0; d];
    let at_origin = integral_with_rule(m, &origin, k, &rule);
    if !(at_origin < 0.0) {
        return Err(KineticError::Infeasible(format!(
            "hyperplane integral at w = 0 is {at_origin} >= 0 for m = {m}; m must exceed the m0 threshold"
        )));
    }
    let dirs: Vec<Vec<f64>> = (0..DELTA_DIRECTIONS)
        .map(|j| {
            let psi = PI * j as f64 / (DELTA_DIRECTIONS - 1) as f64;
            let mut u = vec![0.0; d];
            u[0] = psi.cos();
            u[1] = psi.sin();
            u
        })
        .collect();
    let worst = |a: f64| -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, u) in dirs.iter().enumerate() {
            let w: Vec<f64> = u.iter().map(|x| a * x).collect();
            let val = integral_with_rule(m, &w, k, &rule);
            if val > best.0 {
                best = (val, j);
            }
        }
        best
    };
    let scan = q.radial_nodes.max(8);
    let grid = |r: ThresholdReport| {
        r.with_grid("directions", DELTA_DIRECTIONS as u64)
            .with_grid("radial_scan", scan as u64)
            .with_grid("hyperplane_nodes", q.hyperplane_nodes as u64)
            .with_grid("rel_tol", q.rel_tol)
            .with_grid("m", m)
    };
    let top = DELTA_MAX * (1.0 - 1e-9);
    let mut prev = 0.0;
    for i in 1..=scan {
        let a = top * i as f64 / scan as f64;
        let (val, _) = worst(a);
        if val > 0.0 {
            let mut lo = prev;
            let mut hi = a;
            while hi - lo > q.rel_tol.max(1e-9) * hi {
                let mid = 0.5 * (lo + hi);
                if worst(mid).0 <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (v_lo, j_lo) = worst(lo);
            let (v_hi, j_hi) = worst(hi);
            let psi = |j: usize| PI * j as f64 / (DELTA_DIRECTIONS - 1) as f64;
            let r = ThresholdReport::new("delta", lo)
                .certify("integral at w = 0", &[0.0, 0.0], at_origin)
                .certify("worst integral at |w| = delta", &[lo, psi(j_lo)], v_lo)
                .certify("worst integral beyond delta", &[hi, psi(j_hi)], v_hi);
            return Ok(grid(r));
        }
        prev = a;
    }
    let (v_top, j_top) = worst(top);
    let r = ThresholdReport::new("delta", top)
        .certify("integral at w = 0", &[0.0, 0.0], at_origin)
        .certify(
            "worst integral at |w| = delta",
            &[top, PI * j_top as f64 / (DELTA_DIRECTIONS - 1) as f64],
            v_top,
        );
    Ok(grid(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_kernel_origin_matches_closed_form() {
        let q = QuadratureScheme::default();
        for gamma in [-1.0, 0.0, 1.0] {
            let k = KernelSpec::boltzmann(3, gamma, AngularKernel::Constant(1.0)).unwrap();
            for m in [4.5, 6.0, 9.0] {
                let got = boltzmann_hyperplane_integral(m, &[0.0; 3], &k, &q).unwrap();
                assert_relative_eq!(got, origin_integral_constant_b(m, gamma), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn large_w_is_a_domain_error() {
        let q = QuadratureScheme::default();
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
        assert!(matches!(
            boltzmann_hyperplane_integral(6.0, &[0.5, 0.0, 0.0], &k, &q),
            Err(KineticError::Domain(_))
        ));
    }

    #[test]
    fn limits_for_cutoff_kernels() {
        let q = QuadratureScheme::default();
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
        assert_relative_eq!(origin_integral_limit(&k, &q).unwrap(), -PI, max_relative = 1e-7);
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::CosSquaredHalf).unwrap();
        assert_relative_eq!(origin_integral_limit(&k, &q).unwrap(), -PI / 2.0, max_relative = 1e-7);
    }
}
