use crate::homog::spectral::component;

/// Central periodic differences D_k f = (f(v + h e_k) - f(v - h e_k)) / 2h.
/// D is exact on quadratic polynomials away from the wrap and antisymmetric
/// under summation, so a divergence D . J conserves mass, and conserves
/// momentum and energy whenever sum_i v_i . J_i vanishes, up to terms
/// carried by the boundary ring.
pub struct CentralDifferences {
    n: usize,
    h: f64,
}

impl CentralDifferences {
    pub fn new(n: usize, h: f64) -> Self {
        CentralDifferences { n, h }
    }

    pub fn derivative(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let n = self.n;
        let stride = n.pow(2 - axis as u32);
        let scale = 0.5 / self.h;
        let mut out = vec![0.0; f.len()];
        for (idx, o) in out.iter_mut().enumerate() {
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            let up = base + ((i + 1) % n) * stride;
            let down = base + ((i + n - 1) % n) * stride;
            *o = scale * (f[up] - f[down]);
        }
        out
    }

    /// D ln f with second-order one-sided differences on the first and last
    /// nodes, so the result is exact for quadratic ln f on the whole grid.
    /// Values are floored at `floor` before the logarithm.
    pub fn log_gradient(&self, f: &[f64], floor: f64) -> Vec<Vec<f64>> {
        let n = self.n;
        let logs: Vec<f64> = f.iter().map(|x| x.max(floor).ln()).collect();
        let scale = 0.5 / self.h;
        (0..3)
            .map(|axis| {
                let stride = n.pow(2 - axis as u32);
                let mut out = vec![0.0; f.len()];
                for (idx, o) in out.iter_mut().enumerate() {
                    let i = (idx / stride) % n;
                    let at = |j: usize| logs[idx - i * stride + j * stride];
                    *o = scale
                        * if i == 0 {
                            -3.0 * at(0) + 4.0 * at(1) - at(2)
                        } else if i == n - 1 {
                            3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)
                        } else {
                            at(i + 1) - at(i - 1)
                        };
                }
                out
            })
            .collect()
    }

    /// sum_k D_k J_k.
    pub fn divergence(&self, flux: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; flux[0].len()];
        for (k, j) in flux.iter().enumerate() {
            let d = self.derivative(j, k);
            out.iter_mut().zip(&d).for_each(|(x, y)| *x += y);
        }
        out
    }

    /// -sum_kl D_k D_l a_kl for a symmetric field in [`crate::homog::spectral::COMPONENTS`] order.
    pub fn double_divergence_neg(&self, a: &[Vec<f64>]) -> Vec<f64> {
        let b: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                let rows: Vec<Vec<f64>> = (0..3).map(|l| a[component(k, l)].clone()).collect();
                self.divergence(&rows)
            })
            .collect();
        self.divergence(&b).into_iter().map(|x| -x).collect()
    }

    /// Divergence of the transport flux f u in face form. Faces with both
    /// end values above `threshold` take the centred flux (f_i u_i + f_j u_j)/2,
    /// which reproduces D . (f u); faces touching a smaller value take the
    /// upwind flux, so nodes near zero only receive nonnegative contributions.
    pub fn limited_divergence(&self, f: &[f64], u: &[Vec<f64>], threshold: f64) -> Vec<f64> {
        let n = self.n;
        let inv_h = 1.0 / self.h;
        let mut out = vec![0.0; f.len()];
        for (axis, uk) in u.iter().enumerate() {
            let stride = n.pow(2 - axis as u32);
            for idx in 0..f.len() {
                let i = (idx / stride) % n;
                let next = idx - i * stride + ((i + 1) % n) * stride;
                let (fa, fb) = (f[idx], f[next]);
                let flux = if fa.min(fb) > threshold {
                    0.5 * (fa * uk[idx] + fb * uk[next])
                } else {
                    // d_t f = d_x (f u): mass moves against u
                    let w = 0.5 * (uk[idx] + uk[next]);
                    w.max(0.0) * fb + w.min(0.0) * fa
                };
                out[next] -= flux * inv_h;
                out[idx] += flux * inv_h;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homog::spectral::COMPONENTS;
    use approx::assert_relative_eq;

    fn grid(n: usize, v: f64, g: impl Fn(f64, f64, f64) -> f64) -> (Vec<f64>, f64) {
        let h = 2.0 * v / n as f64;
        let x = |i: usize| -v + i as f64 * h;
        let f = (0..n * n * n)
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                g(x(i), x(j), x(k))
            })
            .collect();
        (f, h)
    }

    #[test]
    fn derivative_of_quadratic_is_exact_inside() {
        let n = 8;
        let (f, h) = grid(n, 2.0, |x, y, z| x * x + 3.0 * y - z);
        let cd = CentralDifferences::new(n, h);
        let idx = (3 * n + 4) * n + 5;
        let x = -2.0 + 3.0 * h;
        assert_relative_eq!(cd.derivative(&f, 0)[idx], 2.0 * x, epsilon = 1e-12);
        assert_relative_eq!(cd.derivative(&f, 1)[idx], 3.0, epsilon = 1e-12);
        assert_relative_eq!(cd.derivative(&f, 2)[idx], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn log_gradient_of_gaussian_is_exact() {
        let n = 8;
        let v = 4.0;
        let (f, h) = grid(n, v, |x, y, z| (-(x * x + y * y + z * z) / 2.0).exp());
        let g = CentralDifferences::new(n, h).log_gradient(&f, 0.0);
        for idx in [0, 7, 100, 511] {
            let i = idx / (n * n);
            assert_relative_eq!(g[0][idx], -(-v + i as f64 * h), epsilon = 1e-12);
        }
    }

    #[test]
    fn centred_faces_match_central_divergence() {
        let n = 8;
        let (f, h) = grid(n, 2.0, |x, y, z| 1.0 + 0.1 * (x + 2.0 * y * z).sin());
        let (ux, _) = grid(n, 2.0, |x, y, _| (x * y).cos());
        let (uy, _) = grid(n, 2.0, |_, y, z| y - z);
        let (uz, _) = grid(n, 2.0, |x, _, z| x * z);
        let u = vec![ux, uy, uz];
        let cd = CentralDifferences::new(n, h);
        let flux: Vec<Vec<f64>> = u.iter().map(|uk| uk.iter().zip(&f).map(|(a, b)| a * b).collect()).collect();
        let central = cd.divergence(&flux);
        let faces = cd.limited_divergence(&f, &u, 0.0);
        for (a, b) in central.iter().zip(&faces) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        assert!(faces.iter().sum::<f64>().abs() < 1e-10);
    }

    #[test]
    fn upwind_faces_keep_zero_nodes_nonnegative() {
        let n = 8;
        let (f, h) = grid(n, 2.0, |x, _, _| if x < 0.0 { 1.0 } else { 0.0 });
        let (ux, _) = grid(n, 2.0, |x, _, _| x.sin());
        let zero = vec![0.0; f.len()];
        let q = CentralDifferences::new(n, h).limited_divergence(&f, &[ux, zero.clone(), zero], 0.5);
        for (fi, qi) in f.iter().zip(&q) {
            if *fi == 0.0 {
                assert!(*qi >= 0.0);
            }
        }
    }

    #[test]
    fn double_divergence_of_quadratic() {
        let n = 16;
        let (diag, h) = grid(n, 4.0, |x, _, _| 1.0 + 0.1 * x * x);
        let zero = vec![0.0; diag.len()];
        let a: Vec<Vec<f64>> = COMPONENTS
            .iter()
            .map(|&(i, j)| if i == j { diag.clone() } else { zero.clone() })
            .collect();
        let c = CentralDifferences::new(n, h).double_divergence_neg(&a);
        let idx = (7 * n + 3) * n + 9;
        assert_relative_eq!(c[idx], -0.2, epsilon = 1e-12);
    }
}
