use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};

/// Truncation radii, node counts and tolerances shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    /// Velocity integrals are truncated to |w| <= outer_radius.
    pub outer_radius: f64,
    /// Radius of the singularity-centered Gauss-Jacobi zone.
    pub polar_radius: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub hyperplane_nodes: usize,
    /// Below this distance the Boltzmann difference f(v') - f(v) drops its
    /// first-order term.
    pub regularization_radius: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme {
            outer_radius: 8.0,
            polar_radius: 1.0,
            radial_nodes: 24,
            angular_nodes: 12,
            hyperplane_nodes: 24,
            regularization_radius: 0.1,
            rel_tol: 1e-6,
        }
    }
}

impl QuadratureScheme {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(KineticError::Configuration(msg));
        if !(self.outer_radius > 1.0) || !self.outer_radius.is_finite() {
            return fail(format!("outer_radius must exceed 1, got {}", self.outer_radius));
        }
        if !(self.polar_radius > 0.0 && self.polar_radius < self.outer_radius) {
            return fail(format!(
                "polar_radius must lie in (0, outer_radius), got {}",
                self.polar_radius
            ));
        }
        if !(self.regularization_radius > 0.0 && self.regularization_radius < 0.5) {
            return fail(format!(
                "regularization_radius must lie in (0, 1/2), got {}",
                self.regularization_radius
            ));
        }
        for (name, n) in [
            ("radial_nodes", self.radial_nodes),
            ("angular_nodes", self.angular_nodes),
            ("hyperplane_nodes", self.hyperplane_nodes),
        ] {
            if n < 2 {
                return fail(format!("{name} must be at least 2, got {n}"));
            }
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return fail(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        Ok(())
    }

    /// Same scheme with every node count doubled.
    pub fn refined(&self) -> Self {
        QuadratureScheme {
            radial_nodes: self.radial_nodes * 2,
            angular_nodes: self.angular_nodes * 2,
            hyperplane_nodes: self.hyperplane_nodes * 2,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        QuadratureScheme::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_radii() {
        let q = QuadratureScheme { polar_radius: 9.0, ..Default::default() };
        assert!(q.validate().is_err());
        let q = QuadratureScheme { regularization_radius: 0.5, ..Default::default() };
        assert!(q.validate().is_err());
        let q = QuadratureScheme { angular_nodes: 1, ..Default::default() };
        assert!(q.validate().is_err());
    }
}
