//! FFT building blocks for the grid solver: 3-D transforms and the
//! Landau coefficient convolution on a zero-padded grid.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{KineticError, Result};

/// Lattice constant of the corrected trapezoid rule for |z|^{-1} in three
/// dimensions: int g(z)/|z| dz ~ h^3 sum_{j != 0} g(jh)/|jh| + C h^2 g(0).
pub const COULOMB_SELF_WEIGHT: f64 = 2.837_297_479_480_6;

/// Forward and inverse 3-D FFTs of side n.
pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let fft = if inverse { &self.inverse } else { &self.forward };
        fft.process(data);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        // axis 1
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    line[j] = data[(i * n + j) * n + k];
                }
                fft.process(&mut line);
                for j in 0..n {
                    data[(i * n + j) * n + k] = line[j];
                }
            }
        }
        // axis 0
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    line[i] = data[(i * n + j) * n + k];
                }
                fft.process(&mut line);
                for i in 0..n {
                    data[(i * n + j) * n + k] = line[i];
                }
            }
        }
        if inverse {
            let scale = 1.0 / (n * n * n) as f64;
            data.iter_mut().for_each(|x| *x *= scale);
        }
    }
}

/// Upper-triangle component order of a symmetric 3x3 matrix.
pub const COMPONENTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Index into [`COMPONENTS`] of the symmetric entry (i, j).
pub fn component(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    COMPONENTS.iter().position(|&c| c == (a, b)).expect("valid component")
}

/// Convolution of grid data with |z|^{2+gamma} Pi(z) by zero padding to 2n.
pub struct LandauConvolution {
    n: usize,
    gamma: f64,
    fft: Fft3,
    a_kernels: Vec<Vec<Complex64>>,
}

impl LandauConvolution {
    pub fn new(n: usize, h: f64, gamma: f64) -> Result<Self> {
        if !(gamma == -3.0 || (-2.0..=1.0).contains(&gamma)) {
            return Err(KineticError::Unsupported(format!(
                "grid solver supports gamma = -3 or -2 <= gamma <= 1, got {gamma}"
            )));
        }
        let big = 2 * n;
        let fft = Fft3::new(big);
        let coord = |i: usize| if i < n { i as f64 * h } else { (i as f64 - big as f64) * h };
        let cell = h * h * h;
        let mut a_kernels = Vec::with_capacity(6);
        for &(a, b) in &COMPONENTS {
            let mut buf = vec![Complex64::new(0.0, 0.0); big * big * big];
            for i in 0..big {
                for j in 0..big {
                    for k in 0..big {
                        let z = [coord(i), coord(j), coord(k)];
                        let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                        let val = if r2 == 0.0 {
                            let delta = if a == b { 1.0 } else { 0.0 };
                            // the trace-free part needs no correction by cubic symmetry
                            if gamma == -3.0 {
                                delta * (2.0 / 3.0) * COULOMB_SELF_WEIGHT * h * h
                            } else if gamma == -2.0 {
                                delta * (2.0 / 3.0) * cell
                            } else {
                                0.0
                            }
                        } else {
                            let delta = if a == b { 1.0 } else { 0.0 };
                            cell * r2.powf(0.5 * (2.0 + gamma)) * (delta - z[a] * z[b] / r2)
                        };
                        buf[(i * big + j) * big + k] = Complex64::new(val, 0.0);
                    }
                }
            }
            fft.transform(&mut buf, false);
            a_kernels.push(buf);
        }
        Ok(LandauConvolution { n, gamma, fft, a_kernels })
    }

    fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let n = self.n;
        let big = 2 * n;
        let mut spec = vec![Complex64::new(0.0, 0.0); big * big * big];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    spec[(i * big + j) * big + k] = Complex64::new(f[(i * n + j) * n + k], 0.0);
                }
            }
        }
        self.fft.transform(&mut spec, false);
        spec
    }

    fn inverse(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        let n = self.n;
        let big = 2 * n;
        self.fft.transform(&mut buf, true);
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[(i * n + j) * n + k] = buf[(i * big + j) * big + k].re;
                }
            }
        }
        out
    }

    /// a_bar components in [`COMPONENTS`] order.
    pub fn a_bar(&self, f: &[f64]) -> Vec<Vec<f64>> {
        let spec = self.forward(f);
        self.a_kernels
            .par_iter()
            .map(|kernel| self.inverse(spec.iter().zip(kernel).map(|(a, b)| a * b).collect()))
            .collect()
    }

    /// sum_l (a_kl * g_l) for k = 0..3.
    pub fn apply_to_vector(&self, g: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let specs: Vec<Vec<Complex64>> = g.par_iter().map(|x| self.forward(x)).collect();
        (0..3)
            .into_par_iter()
            .map(|k| {
                let mut acc = vec![Complex64::new(0.0, 0.0); specs[0].len()];
                for (l, spec) in specs.iter().enumerate() {
                    let kernel = &self.a_kernels[component(k, l)];
                    for ((o, s), w) in acc.iter_mut().zip(spec).zip(kernel) {
                        *o += s * w;
                    }
                }
                self.inverse(acc)
            })
            .collect()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}
