use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::quadrature::{graded_toward, unit_sphere_area, GaussRule};

/// Which collision operator a [`KernelSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    Landau,
    Boltzmann,
}

/// Angular cross-section b as a function of x = sin(theta/2) in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AngularKernel {
    Constant(f64),
    /// b = cos^2(theta/2) = 1 - x^2
    CosSquaredHalf,
    /// b = x^{-(d-1)-2s}, the model non-cutoff profile
    NonCutoff { s: f64 },
    /// b = x^exponent
    SinPower { exponent: f64 },
}

impl AngularKernel {
    pub fn value(&self, x: f64, dim: usize) -> f64 {
        match *self {
            AngularKernel::Constant(c) => c,
            AngularKernel::CosSquaredHalf => 1.0 - x * x,
            AngularKernel::NonCutoff { s } => x.powf(-(dim as f64 - 1.0) - 2.0 * s),
            AngularKernel::SinPower { exponent } => x.powf(exponent),
        }
    }

    /// Whether the total cross-section over the sphere is finite.
    pub fn is_cutoff(&self, dim: usize) -> bool {
        match *self {
            AngularKernel::Constant(_) | AngularKernel::CosSquaredHalf => true,
            AngularKernel::NonCutoff { .. } => false,
            AngularKernel::SinPower { exponent } => exponent > -(dim as f64 - 1.0),
        }
    }
}

/// Collision kernel B(w, sigma) = |w|^gamma b(sin(theta/2)), or the Landau
/// kernel |w|^{2+gamma} Pi(w).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub dim: usize,
    pub gamma: f64,
    pub operator: OperatorKind,
    pub b: AngularKernel,
    pub noncutoff_s: Option<f64>,
    /// Prefactor of the non-singular Carleman term; zero for Landau.
    pub c_b: f64,
}

/// Allowed ratio between a declared non-cutoff b and x^{-(d-1)-2s} near x = 0.
pub const NONCUTOFF_PROFILE_FACTOR: f64 = 4.0;

impl KernelSpec {
    pub fn landau(dim: usize, gamma: f64) -> Result<Self> {
        check_dim(dim)?;
        let lo = -(dim as f64);
        if !(gamma >= lo && gamma <= 1.0) {
            return Err(KineticError::Argument(format!(
                "Landau gamma must lie in [{lo}, 1], got {gamma}"
            )));
        }
        Ok(KernelSpec {
            dim,
            gamma,
            operator: OperatorKind::Landau,
            b: AngularKernel::Constant(0.0),
            noncutoff_s: None,
            c_b: 0.0,
        })
    }

    pub fn boltzmann(dim: usize, gamma: f64, b: AngularKernel) -> Result<Self> {
        let s = match b {
            AngularKernel::NonCutoff { s } => Some(s),
            _ => None,
        };
        Self::boltzmann_with_s(dim, gamma, b, s)
    }

    /// Boltzmann kernel with an explicitly declared non-cutoff order s.
    pub fn boltzmann_with_s(
        dim: usize,
        gamma: f64,
        b: AngularKernel,
        noncutoff_s: Option<f64>,
    ) -> Result<Self> {
        check_dim(dim)?;
        if !(gamma > -(dim as f64)) || !gamma.is_finite() {
            return Err(KineticError::Argument(format!(
                "Boltzmann gamma must exceed -{dim}, got {gamma}"
            )));
        }
        if let AngularKernel::Constant(c) = b {
            if !(c > 0.0) {
                return Err(KineticError::Argument(format!(
                    "constant cross-section must be positive, got {c}"
                )));
            }
        }
        if let Some(s) = noncutoff_s {
            if !(s > 0.0 && s < 1.0) {
                return Err(KineticError::Argument(format!(
                    "non-cutoff order s must lie in (0, 1), got {s}"
                )));
            }
            let expo = -(dim as f64 - 1.0) - 2.0 * s;
            for x in [1e-3, 1e-4, 1e-5] {
                let ratio = b.value(x, dim) / x.powf(expo);
                if !(ratio >= 1.0 / NONCUTOFF_PROFILE_FACTOR && ratio <= NONCUTOFF_PROFILE_FACTOR) {
                    return Err(KineticError::KernelRejected(format!(
                        "b does not match the non-cutoff profile of order s = {s} at sin(theta/2) = {x} (ratio {ratio})"
                    )));
                }
            }
        } else if !b.is_cutoff(dim) {
            return Err(KineticError::KernelRejected(
                "non-integrable b requires a declared non-cutoff order s".into(),
            ));
        }
        let mut spec = KernelSpec {
            dim,
            gamma,
            operator: OperatorKind::Boltzmann,
            b,
            noncutoff_s,
            c_b: 0.0,
        };
        spec.momentum_transfer()?;
        spec.c_b = spec.compute_c_b();
        Ok(spec)
    }

    pub fn is_cutoff(&self) -> bool {
        self.noncutoff_s.is_none() && self.b.is_cutoff(self.dim)
    }

    /// b(x) at x = sin(theta/2).
    pub fn b_value(&self, x: f64) -> f64 {
        self.b.value(x, self.dim)
    }

    /// b folded onto theta in [0, pi/2]: b(x) + b(cos(theta/2)), zero for
    /// x > 1/sqrt(2). The gain term is symmetric under sigma -> -sigma, so this
    /// leaves the operator unchanged while moving all angular mass to
    /// grazing deviations.
    pub fn b_folded(&self, x: f64) -> f64 {
        if x > FRAC_1_SQRT_2 {
            return 0.0;
        }
        let c = (1.0 - x * x).max(0.0).sqrt();
        self.b_value(x) + self.b_value(c)
    }

    /// |S^{d-2}|, the measure of the azimuthal sphere around a polar axis.
    pub fn azimuthal_area(&self) -> f64 {
        if self.dim == 2 {
            2.0
        } else {
            unit_sphere_area(self.dim - 1)
        }
    }

    /// int_{S^{d-1}} sin^2(theta/2) b dsigma; errors if it diverges.
    pub fn momentum_transfer(&self) -> Result<f64> {
        let dim = self.dim;
        let g = |theta: f64| {
            let x = (0.5 * theta).sin();
            theta.sin().powi(dim as i32 - 2) * x * x * self.b_value(x)
        };
        let head = singular_head_integral(&g, 0.5)?;
        let body = GaussRule::legendre(24).mapped(0.5, PI).integrate(g);
        Ok(self.azimuthal_area() * (head + body))
    }

    /// int_{S^{d-1}} b dsigma over the folded hemisphere (cutoff kernels only).
    pub fn total_cross_section(&self) -> Option<f64> {
        if !self.is_cutoff() {
            return None;
        }
        let dim = self.dim;
        let g = |theta: f64| theta.sin().powi(dim as i32 - 2) * self.b_folded((0.5 * theta).sin());
        Some(self.azimuthal_area() * composite(0.0, 0.5 * PI, 8, 16, g))
    }

    /// Angular collision-frequency factor: the total cross-section for cutoff
    /// kernels, the momentum-transfer integral otherwise.
    pub fn frequency_factor(&self) -> f64 {
        match self.total_cross_section() {
            Some(v) => v,
            None => self.momentum_transfer().unwrap_or(f64::NAN),
        }
    }

    /// C_b = |S^{d-2}| int_0^{pi/2} sin^{d-2}(theta) b~(sin(theta/2))
    ///        (cos(theta/2)^{-(d+gamma)} - 1) dtheta
    fn compute_c_b(&self) -> f64 {
        let dim = self.dim;
        let k = dim as f64 + self.gamma;
        let g = |theta: f64| {
            let half = 0.5 * theta;
            let bump = (-k * half.cos().ln()).exp_m1();
            theta.sin().powi(dim as i32 - 2) * self.b_folded(half.sin()) * bump
        };
        let rule = graded_toward(0.0, 0.5 * PI, 0.5, 60, 12);
        self.azimuthal_area() * rule.integrate(g)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(KineticError::Unsupported(format!(
            "velocity dimension {dim}; only d = 2 and d = 3 are implemented"
        )))
    }
}

fn composite(a: f64, b: f64, panels: usize, per: usize, g: impl Fn(f64) -> f64) -> f64 {
    crate::quadrature::composite_legendre(a, b, panels, per).integrate(g)
}

/// Overflow guard for integrals that are declared divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// int_0^top g over dyadic shells [top 2^{-k-1}, top 2^{-k}], detecting
/// power-law divergence at 0 from the ratio of successive shell integrals.
pub(crate) fn singular_head_integral(g: &dyn Fn(f64) -> f64, top: f64) -> Result<f64> {
    let rule = GaussRule::legendre(12);
    let mut total = 0.0;
    let mut prev = f64::NAN;
    let mut hi = top;
    const LEVELS: usize = 80;
    for k in 0..LEVELS {
        let lo = 0.5 * hi;
        let inc = rule.mapped(lo, hi).integrate(g);
        if !inc.is_finite() {
            return Err(KineticError::KernelRejected(format!(
                "angular integrand is not finite near 0 (shell {k})"
            )));
        }
        total += inc;
        if k >= 8 && prev.abs() > 0.0 {
            let ratio = inc.abs() / prev.abs();
            if ratio >= 0.9999 {
                return Err(KineticError::KernelRejected(format!(
                    "angular integral diverges at grazing angles (shell ratio {ratio:.4})"
                )));
            }
            let tail = inc.abs() * ratio / (1.0 - ratio);
            if k == LEVELS - 1 || tail <= 1e-15 * total.abs() {
                if (total + tail).abs() > DIVERGENCE_GUARD {
                    return Err(KineticError::KernelRejected(format!(
                        "angular integral exceeds the overflow guard {DIVERGENCE_GUARD:e}"
                    )));
                }
                return Ok(total + inc.signum() * tail);
            }
        }
        if inc == 0.0 && k >= 8 {
            return Ok(total);
        }
        prev = inc;
        hi = lo;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn folded_constant_kernel_doubles() {
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
        assert_eq!(k.b_folded(0.3), 2.0);
        assert_eq!(k.b_folded(0.8), 0.0);
    }

    #[test]
    fn folded_cos_squared_is_one() {
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::CosSquaredHalf).unwrap();
        assert_relative_eq!(k.b_folded(0.4), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn total_cross_section_constant() {
        let k = KernelSpec::boltzmann(3, -1.0, AngularKernel::Constant(1.0)).unwrap();
        assert_relative_eq!(k.total_cross_section().unwrap(), 4.0 * PI, max_relative = 1e-12);
        let k2 = KernelSpec::boltzmann(2, -1.0, AngularKernel::Constant(1.0)).unwrap();
        assert_relative_eq!(k2.total_cross_section().unwrap(), 2.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn c_b_for_constant_kernel_gamma_zero_d3() {
        // 4 pi int_0^{pi/2} sin t (cos(t/2)^{-3} - 1) dt with the folded b = 2
        // substitute c = cos(t/2): sin t dt = -4 c dc
        // = 2 * 2 pi * 4 int_{1/sqrt2}^1 (c^{-2} - c) dc
        let lo = FRAC_1_SQRT_2;
        let inner = (1.0 / lo - 1.0) - 0.5 * (1.0 - lo * lo);
        let exact = 2.0 * 2.0 * PI * 4.0 * inner;
        let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
        assert_relative_eq!(k.c_b, exact, max_relative = 1e-12);
    }

    #[test]
    fn noncutoff_accepted_and_c_b_finite() {
        let k = KernelSpec::boltzmann(3, -1.0, AngularKernel::NonCutoff { s: 0.25 }).unwrap();
        assert!(k.c_b.is_finite() && k.c_b > 0.0);
        assert!(!k.is_cutoff());
    }

    #[test]
    fn s_equal_one_profile_rejected() {
        let err = KernelSpec::boltzmann_with_s(3, 0.0, AngularKernel::SinPower { exponent: -4.0 }, None);
        assert!(matches!(err, Err(KineticError::KernelRejected(_))));
    }

    #[test]
    fn landau_gamma_range() {
        assert!(KernelSpec::landau(3, -3.0).is_ok());
        assert!(KernelSpec::landau(3, -3.5).is_err());
        assert!(KernelSpec::landau(4, 0.0).is_err());
    }
}
