//! Large-velocity bound: Q(f, f)(e) for f <= |.|^{-m} vanishing on B_delta
//! with f(e) = 1.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::barrier::{pure_power_barrier, BarrierField};
use crate::boltzmann::q_boltzmann_carleman_detailed;
use crate::error::{KineticError, Result};
use crate::field::{norm, RadialWindow, VelocityField, Windowed};
use crate::kernel::{KernelSpec, OperatorKind};
use crate::landau::q_landau_detailed;
use crate::norm::sampling_grid;
use crate::quadrature::{graded_toward, pairwise_sum, unit_sphere_area, GaussRule};
use crate::scheme::QuadratureScheme;

/// |v|^{-m} times a radial window that rises on [delta, rise_end] and
/// optionally falls on [fall.0, fall.1].
#[derive(Clone)]
pub struct CrudeFamilyMember {
    inner: Windowed<BarrierField>,
    m: f64,
    delta: f64,
}

impl CrudeFamilyMember {
    pub fn new(dim: usize, m: f64, delta: f64, rise_end: f64, fall: Option<(f64, f64)>) -> Result<Self> {
        if !(delta > 0.0 && delta < rise_end && rise_end <= 1.0) {
            return Err(KineticError::Argument(format!(
                "need 0 < delta < rise_end <= 1, got delta = {delta}, rise_end = {rise_end}"
            )));
        }
        if let Some((a, b)) = fall {
            if !(1.0 < a && a < b) {
                return Err(KineticError::Argument(format!("fall window ({a}, {b}) must lie beyond |v| = 1")));
            }
        }
        let barrier = pure_power_barrier(m, 1.0)?;
        let window = RadialWindow { rise: Some((delta, rise_end)), fall };
        Ok(CrudeFamilyMember { inner: Windowed::new(BarrierField { barrier, dim }, window), m, delta })
    }

    /// |v|^{-m} switched on between delta and 2 delta.
    pub fn standard(dim: usize, m: f64, delta: f64) -> Result<Self> {
        Self::new(dim, m, delta, (2.0 * delta).min(1.0), None)
    }
}

impl VelocityField for CrudeFamilyMember {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.inner.eval(v)
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        self.inner.gradient(v)
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        self.inner.hessian(v)
    }
    fn decay_exponent(&self) -> f64 {
        self.m
    }
    fn amplitude(&self) -> f64 {
        // <v>^m |v|^{-m} is largest at |v| = delta
        (1.0 + self.delta.powi(-2)).powf(0.5 * self.m)
    }
    fn inner_void_radius(&self) -> Option<f64> {
        Some(self.delta)
    }
}

/// Value of Q(f, f)(e) with the diagnostics that accompany it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrudeBound {
    pub value: f64,
    pub scale: f64,
    /// Landau only: bound on the a_bar mass beyond the truncation radius.
    pub truncation_estimate: f64,
}

fn check_hypotheses(f: &dyn VelocityField, e: &[f64], q: &QuadratureScheme) -> Result<(f64, f64)> {
    let d = f.dim();
    if e.len() != d {
        return Err(KineticError::Argument(format!("e must have dimension {d}")));
    }
    if (norm(e) - 1.0).abs() > 1e-12 {
        return Err(KineticError::Argument(format!("e must be a unit vector, |e| = {}", norm(e))));
    }
    let delta = f.inner_void_radius().ok_or_else(|| {
        KineticError::Configuration("the field must declare a void ball B_delta around the origin".into())
    })?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(KineticError::Configuration(format!("void radius must lie in (0, 1), got {delta}")));
    }
    let fe = f.eval(e);
    if (fe - 1.0).abs() > 1e-12 {
        return Err(KineticError::Configuration(format!("f(e) must equal 1, got {fe}")));
    }
    let m = f.decay_exponent();
    if !(m > 0.0) {
        return Err(KineticError::Configuration(format!("declared decay exponent must be positive, got {m}")));
    }
    let mut pts = sampling_grid(d, q);
    // extra samples through the void edge and around e
    let n = 256;
    for k in 0..=n {
        let r = 2.0 * k as f64 / n as f64;
        pts.push(e.iter().map(|x| x * r).collect());
    }
    for v in &pts {
        let r = norm(v);
        let val = f.eval(v);
        if !val.is_finite() || val < 0.0 {
            return Err(KineticError::Configuration(format!("f({v:?}) = {val} is not a finite nonnegative value")));
        }
        if r < delta && val != 0.0 {
            return Err(KineticError::Configuration(format!("f is nonzero inside B_delta at {v:?}")));
        }
        if r > 0.0 && val > r.powf(-m) * (1.0 + 1e-12) {
            return Err(KineticError::Configuration(format!("f exceeds |v|^-m at {v:?}")));
        }
    }
    Ok((m, delta))
}

/// Q(f, f)(e) under the large-velocity hypotheses.
pub fn crude_bound_check(f: &dyn VelocityField, e: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> Result<f64> {
    Ok(crude_bound_detailed(f, e, k, q)?.value)
}

pub fn crude_bound_detailed(f: &dyn VelocityField, e: &[f64], k: &KernelSpec, q: &QuadratureScheme) -> Result<CrudeBound> {
    q.validate()?;
    if f.dim() != k.dim {
        return Err(KineticError::Argument("field and kernel dimensions differ".into()));
    }
    check_hypotheses(f, e, q)?;
    match k.operator {
        OperatorKind::Landau => {
            let ev = q_landau_detailed(f, e, k, q)?;
            Ok(CrudeBound {
                value: ev.value,
                scale: ev.scale,
                truncation_estimate: ev.coefficients.truncation_estimate,
            })
        }
        OperatorKind::Boltzmann => {
            let ev = q_boltzmann_carleman_detailed(f, e, k, q)?;
            Ok(CrudeBound { value: ev.value, scale: ev.scale, truncation_estimate: 0.0 })
        }
    }
}

/// int_{|w| > delta} |e - w|^p |w|^{-m} dw for a unit vector e, or +infinity
/// when the tail diverges.
pub fn exterior_potential(d: usize, p: f64, m: f64, delta: f64) -> f64 {
    let df = d as f64;
    if m <= df + p {
        return f64::INFINITY;
    }
    // shell integral S(r) = int_{|w| = r} |e - w|^p dS
    let shell = |r: f64| -> f64 {
        if d == 3 {
            let q2 = p + 2.0;
            if q2 == 0.0 {
                return 2.0 * std::f64::consts::PI * r * ((1.0 + r).ln() - (1.0 - r).abs().ln());
            }
            2.0 * std::f64::consts::PI * r / q2 * ((1.0 + r).powf(q2) - (1.0 - r).abs().powf(q2))
        } else {
            // 2 r int_0^pi (1 + r^2 - 2 r cos t)^{p/2} dt, graded toward t = 0
            let rule = graded_toward(0.0, std::f64::consts::PI, 0.5, 40, 10);
            2.0 * r * rule.integrate(|t| {
                let s = 0.5 * t;
                ((1.0 - r) * (1.0 - r) + 4.0 * r * s.sin() * s.sin()).powf(0.5 * p)
            })
        }
    };
    let g = |r: f64| r.powf(-m) * shell(r);
    let mut total = Vec::new();
    if delta < 1.0 {
        let mid = 0.5 * (1.0 + delta);
        let len = 1.0 - mid;
        let rule = graded_toward(0.0, len, 0.5, 50, 10);
        total.push(rule.integrate(|s| g(1.0 - s)));
        let rule = graded_toward(0.0, mid - delta, 0.5, 20, 10);
        total.push(rule.integrate(|s| g(delta + s)));
    }
    let start = delta.max(1.0);
    let rule = graded_toward(0.0, 1.0, 0.5, 50, 10);
    total.push(rule.integrate(|s| g(start + s)));
    let base = GaussRule::legendre(12);
    let mut lo = start + 1.0;
    let top = 1e6;
    while lo < top {
        let hi = lo * 2.0;
        total.push(base.mapped(lo, hi).integrate(g));
        lo = hi;
    }
    // tail: S(r) ~ |S^{d-1}| r^{d-1+p}
    total.push(unit_sphere_area(d) * lo.powf(df + p - m) / (m - df - p));
    pairwise_sum(&total)
}

/// Explicit upper bound on Q_L(f, f)(e) for f <= |.|^{-m} on |w| > delta,
/// f = |.|^{-m} near e:
/// (d-1) m (m+1) int |e-w|^{2+gamma} |w|^{-m} + c_bar bound.
pub fn landau_crude_envelope(m: f64, d: usize, gamma: f64, delta: f64) -> Result<f64> {
    if d == 2 && gamma <= -2.0 {
        return Err(KineticError::Unsupported("d = 2 with gamma <= -2".into()));
    }
    if !(delta > 0.0 && delta < 1.0) || !(m > 0.0) {
        return Err(KineticError::Argument(format!("need m > 0 and delta in (0, 1), got m = {m}, delta = {delta}")));
    }
    let df = d as f64;
    let a = exterior_potential(d, 2.0 + gamma, m, delta);
    let c = if gamma == -df {
        (df - 1.0) * unit_sphere_area(d)
    } else {
        (df - 1.0) * (df + gamma) * exterior_potential(d, gamma, m, delta)
    };
    Ok((df - 1.0) * m * (m + 1.0) * a + c)
}

/// Q(f, f)(e) over a family of admissible f; the maximum is the measured C0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrudeSweep {
    pub m: f64,
    pub delta: f64,
    pub values: Vec<f64>,
    pub measured_c0: f64,
}

/// Family: rise end in {2 delta, 1.5 delta} (capped at 1), no fall or a
/// fall on [V/4, V/2] or [V/2, V]; evaluated at e = e1.
pub fn crude_sweep(m: f64, delta: f64, k: &KernelSpec, q: &QuadratureScheme) -> Result<CrudeSweep> {
    let d = k.dim;
    let mut e = vec![0.0; d];
    e[0] = 1.0;
    let v = q.outer_radius;
    let falls = [None, Some((0.25 * v, 0.5 * v)), Some((0.5 * v, v))];
    let mut values = Vec::new();
    for rise in [2.0 * delta, 1.5 * delta] {
        for fall in falls {
            let f = CrudeFamilyMember::new(d, m, delta, rise.min(1.0), fall)?;
            values.push(crude_bound_check(&f, &e, k, q)?);
        }
    }
    let measured_c0 = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(CrudeSweep { m, delta, values, measured_c0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exterior_potential_matches_radial_integral_at_p_zero() {
        // p = 0: |S^2| int_delta^inf r^{2-m} dr = 4 pi delta^{3-m} / (m - 3)
        let got = exterior_potential(3, 0.0, 6.0, 0.2);
        assert_relative_eq!(got, 4.0 * std::f64::consts::PI * 0.2f64.powf(-3.0) / 3.0, max_relative = 1e-8);
        let got2 = exterior_potential(2, 0.0, 6.0, 0.2);
        assert_relative_eq!(got2, 2.0 * std::f64::consts::PI * 0.2f64.powf(-4.0) / 4.0, max_relative = 1e-8);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let q = QuadratureScheme::default();
        let k = KernelSpec::landau(3, -3.0).unwrap();
        let f = crate::field::Maxwellian::standard(3);
        assert!(matches!(
            crude_bound_check(&f, &[1.0, 0.0, 0.0], &k, &q),
            Err(KineticError::Configuration(_))
        ));
    }

    #[test]
    fn family_member_meets_hypotheses() {
        let f = CrudeFamilyMember::standard(3, 6.0, 0.1).unwrap();
        assert_eq!(f.eval(&[1.0, 0.0, 0.0]), 1.0);
        assert_eq!(f.eval(&[0.05, 0.0, 0.0]), 0.0);
        check_hypotheses(&f, &[1.0, 0.0, 0.0], &QuadratureScheme::default()).unwrap();
    }
}
