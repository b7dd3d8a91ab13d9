//! Landau operator in non-divergence form: Q(f, f) = a_bar : D^2 f + c_bar f.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KineticError, Result};
use crate::field::VelocityField;
use crate::kernel::{KernelSpec, OperatorKind};
use crate::quadrature::{pairwise_sum, to_point, unit_sphere_area, CenteredBallRule, SphereRule};
use crate::scheme::QuadratureScheme;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandauCoefficients {
    /// int |v - w|^{2+gamma} Pi(v - w) f(w) dw, row-major d x d
    #[serde(serialize_with = "serialize_matrix")]
    pub a_bar: DMatrix<f64>,
    pub c_bar: f64,
    pub at_point: Vec<f64>,
    /// Bound on the mass of the a_bar integrand beyond the truncation radius.
    pub truncation_estimate: f64,
}

fn serialize_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    serde::Serialize::serialize(&rows, s)
}

/// Value of Q(f, f)(v) together with a magnitude scale for tolerances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandauEvaluation {
    pub value: f64,
    /// |a_bar|_F |D^2 f|_F + c_bar f(v)
    pub scale: f64,
    pub coefficients: LandauCoefficients,
}

pub(crate) fn check_operator_inputs(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
    expected: OperatorKind,
) -> Result<()> {
    q.validate()?;
    if k.operator != expected {
        return Err(KineticError::Argument(format!(
            "expected a {expected:?} kernel, got {:?}",
            k.operator
        )));
    }
    if f.dim() != k.dim || v.len() != k.dim {
        return Err(KineticError::Argument(format!(
            "dimension mismatch: kernel d = {}, field d = {}, point d = {}",
            k.dim,
            f.dim(),
            v.len()
        )));
    }
    Ok(())
}

/// int_{|w| <= V} f(w) |v - w|^power dw with polar nodes centered at v.
pub fn riesz_potential(f: &dyn VelocityField, v: &[f64], power: f64, q: &QuadratureScheme) -> f64 {
    let d = v.len();
    let sphere = SphereRule::new(d, q.angular_nodes).toward_origin(&to_point(v));
    let rule = CenteredBallRule::new(d, v, q.outer_radius, q.polar_radius, power, q.radial_nodes, &sphere);
    let terms: Vec<f64> = rule
        .nodes
        .par_iter()
        .map(|n| n.weight * f.eval(&n.point[..d]))
        .collect();
    pairwise_sum(&terms)
}

pub fn landau_coefficients(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<LandauCoefficients> {
    check_operator_inputs(f, v, k, q, OperatorKind::Landau)?;
    let d = k.dim;
    let gamma = k.gamma;
    let df = d as f64;
    if d == 2 && gamma <= -2.0 {
        return Err(KineticError::Unsupported(
            "the Landau operator with d = 2 and gamma = -2 is not covered".into(),
        ));
    }
    let sphere = SphereRule::new(d, q.angular_nodes).toward_origin(&to_point(v));
    let rule = CenteredBallRule::new(
        d,
        v,
        q.outer_radius,
        q.polar_radius,
        2.0 + gamma,
        q.radial_nodes,
        &sphere,
    );
    let fw: Vec<f64> = rule
        .nodes
        .par_iter()
        .map(|n| n.weight * f.eval(&n.point[..d]))
        .collect();
    if let Some((i, bad)) = fw.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        let at = rule.nodes[i].point[..d].to_vec();
        return Err(KineticError::Evaluation { at, value: *bad });
    }
    let mut a_bar = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let delta = if i == j { 1.0 } else { 0.0 };
            let terms: Vec<f64> = rule
                .nodes
                .iter()
                .zip(&fw)
                .map(|(n, w)| w * (delta - n.direction[i] * n.direction[j]))
                .collect();
            let val = pairwise_sum(&terms);
            a_bar[(i, j)] = val;
            a_bar[(j, i)] = val;
        }
    }
    let c_bar = if gamma == -df {
        (df - 1.0) * unit_sphere_area(d) * f.eval(v)
    } else {
        (df - 1.0) * (df + gamma) * riesz_potential(f, v, gamma, q)
    };
    let p = df - f.decay_exponent() + (2.0 + gamma).max(gamma);
    let truncation_estimate = if f.amplitude() == 0.0 || f.decay_exponent().is_infinite() {
        0.0
    } else if p >= 0.0 {
        f64::INFINITY
    } else {
        f.amplitude() * unit_sphere_area(d) * q.outer_radius.powf(p) / (-p)
    };
    Ok(LandauCoefficients { a_bar, c_bar, at_point: v.to_vec(), truncation_estimate })
}

pub fn q_landau_detailed(
    f: &dyn VelocityField,
    v: &[f64],
    k: &KernelSpec,
    q: &QuadratureScheme,
) -> Result<LandauEvaluation> {
    let hess = f.hessian(v).ok_or_else(|| {
        KineticError::Capability(
            "q_landau needs second derivatives; wrap the field in FiniteDifference".into(),
        )
    })?;
    let coefficients = landau_coefficients(f, v, k, q)?;
    let fv = f.eval(v);
    let value = coefficients.a_bar.component_mul(&hess).sum() + coefficients.c_bar * fv;
    let scale = coefficients.a_bar.norm() * hess.norm() + coefficients.c_bar.abs() * fv;
    Ok(LandauEvaluation { value, scale, coefficients })
}

/// Q(f, f)(v) = a_bar_ij d_ij f(v) + c_bar f(v).
pub fn q_landau(f: &dyn VelocityField, v: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    Ok(q_landau_detailed(f, v, k, q)?.value)
}

/// trace Pi(z) for z != 0, where Pi(z) = I - z z^T / |z|^2.
pub fn projection(z: &[f64]) -> DMatrix<f64> {
    let d = z.len();
    let s: f64 = z.iter().map(|x| x * x).sum();
    DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { 0.0 } - z[i] * z[j] / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, Maxwellian, ZeroField};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_zero_coefficients() {
        let k = KernelSpec::landau(3, -3.0).unwrap();
        let c = landau_coefficients(&ZeroField { dim: 3 }, &[0.1, 0.2, 0.3], &k, &QuadratureScheme::default())
            .unwrap();
        assert_eq!(c.a_bar.abs().max(), 0.0);
        assert_eq!(c.c_bar, 0.0);
    }

    #[test]
    fn coulomb_c_bar_is_eight_pi_f() {
        let k = KernelSpec::landau(3, -3.0).unwrap();
        let m = Maxwellian::standard(3);
        let v = [0.3, -0.2, 0.5];
        let c = landau_coefficients(&m, &v, &k, &QuadratureScheme::default()).unwrap();
        assert_relative_eq!(c.c_bar, 8.0 * PI * m.eval(&v), max_relative = 1e-15);
    }

    #[test]
    fn radial_field_gives_isotropic_a_bar_at_origin() {
        let k = KernelSpec::landau(3, -1.0).unwrap();
        let c = landau_coefficients(&Maxwellian::standard(3), &[0.0; 3], &k, &QuadratureScheme::default())
            .unwrap();
        let lam = c.a_bar[(0, 0)];
        assert!((c.a_bar.clone() - DMatrix::identity(3, 3) * lam).abs().max() < 1e-12 * lam);
    }

    #[test]
    fn two_d_coulomb_is_unsupported() {
        let k = KernelSpec::landau(2, -2.0).unwrap();
        let err = landau_coefficients(&Maxwellian::standard(2), &[0.0, 0.0], &k, &QuadratureScheme::default());
        assert!(matches!(err, Err(KineticError::Unsupported(_))));
    }

    #[test]
    fn black_box_field_requires_hessian() {
        let k = KernelSpec::landau(3, -3.0).unwrap();
        let f = FnField::new(3, 12.0, 1.0, |v| (-v.iter().map(|x| x * x).sum::<f64>()).exp());
        let err = q_landau(&f, &[0.0; 3], &k, &QuadratureScheme::default());
        assert!(matches!(err, Err(KineticError::Capability(_))));
    }

    #[test]
    fn projection_trace() {
        let p = projection(&[0.3, -1.2, 2.0]);
        assert_relative_eq!(p.trace(), 2.0, epsilon = 1e-15);
    }
}
