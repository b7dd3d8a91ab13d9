use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KineticError, Result};
use crate::field::{bracket, VelocityField};
use crate::quadrature::SphereRule;
use crate::scheme::QuadratureScheme;

/// Sampled sup of <v>^m f(v) with the node that attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedNorm {
    pub value: f64,
    pub maximizer: Vec<f64>,
}

/// Radial samples per unit of `radial_nodes` in the sup-norm grid.
const RADIAL_OVERSAMPLING: usize = 16;

/// Nodes of the sup-norm sampling grid: the origin plus rays along the
/// sphere-rule directions and the coordinate axes, out to the outer radius.
pub fn sampling_grid(dim: usize, q: &QuadratureScheme) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = SphereRule::new(dim, q.angular_nodes)
        .directions
        .iter()
        .map(|d| d[..dim].to_vec())
        .collect();
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = sign;
            dirs.push(e);
        }
    }
    let n = (RADIAL_OVERSAMPLING * q.radial_nodes).max(64);
    let mut pts = vec![vec![0.0; dim]];
    for k in 1..=n {
        let r = q.outer_radius * k as f64 / n as f64;
        for d in &dirs {
            pts.push(d.iter().map(|x| x * r).collect());
        }
    }
    pts
}

/// Maximum of <v>^m f(v) over the given nodes; ties go to the
/// lexicographically smallest node.
pub fn weighted_sup_on(f: &dyn VelocityField, m: f64, nodes: &[Vec<f64>]) -> Result<WeightedNorm> {
    if !(m >= 0.0) {
        return Err(KineticError::Argument(format!("weight exponent must be >= 0, got {m}")));
    }
    let vals: Vec<f64> = nodes.par_iter().map(|v| f.eval(v)).collect();
    let mut best: Option<(f64, usize)> = None;
    for (i, (v, &fv)) in nodes.iter().zip(&vals).enumerate() {
        if !fv.is_finite() {
            return Err(KineticError::Evaluation { at: v.clone(), value: fv });
        }
        let w = bracket(v).powf(m) * fv;
        best = match best {
            None => Some((w, i)),
            Some((bw, bi)) => {
                if w > bw || (w == bw && lex_less(v, &nodes[bi])) {
                    Some((w, i))
                } else {
                    Some((bw, bi))
                }
            }
        };
    }
    let (value, idx) = best.ok_or_else(|| KineticError::Argument("empty sampling grid".into()))?;
    Ok(WeightedNorm { value, maximizer: nodes[idx].clone() })
}

/// Grid-sampled weighted sup norm ||f||_{L^inf_m}.
pub fn weighted_sup_norm(f: &dyn VelocityField, m: f64, q: &QuadratureScheme) -> Result<WeightedNorm> {
    q.validate()?;
    weighted_sup_on(f, m, &sampling_grid(f.dim(), q))
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, Maxwellian, ZeroField};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_norm() {
        let q = QuadratureScheme::default();
        let n = weighted_sup_norm(&ZeroField { dim: 3 }, 4.0, &q).unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn maxwellian_unweighted_peak() {
        let q = QuadratureScheme::default();
        let n = weighted_sup_norm(&Maxwellian::standard(3), 0.0, &q).unwrap();
        assert_relative_eq!(n.value, (2.0 * PI).powf(-1.5), max_relative = 1e-15);
        assert_eq!(n.maximizer, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn weight_cancellation_gives_one() {
        let q = QuadratureScheme::default();
        let f = FnField::new(3, 3.0, 1.0, |v| bracket(v).powf(-3.0));
        let n = weighted_sup_norm(&f, 3.0, &q).unwrap();
        assert_relative_eq!(n.value, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn non_finite_values_are_reported() {
        let q = QuadratureScheme::default();
        let f = FnField::new(2, 0.0, 1.0, |v| if v[0] > 1.0 { f64::NAN } else { 0.0 });
        assert!(matches!(weighted_sup_norm(&f, 0.0, &q), Err(KineticError::Evaluation { .. })));
    }
}
