//! Velocity fields: nonnegative functions on R^d with declared decay.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{KineticError, Result};

/// Japanese bracket sqrt(1 + |v|^2).
#[inline]
pub fn bracket(v: &[f64]) -> f64 {
    (1.0 + norm_sq(v)).sqrt()
}

#[inline]
pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[inline]
pub fn norm(v: &[f64]) -> f64 {
    norm_sq(v).sqrt()
}

/// A nonnegative function on d-dimensional velocity space.
///
/// The decay metadata declares `eval(v) <= amplitude() * <v>^{-decay_exponent()}`.
pub trait VelocityField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, v: &[f64]) -> f64;

    fn gradient(&self, _v: &[f64]) -> Option<DVector<f64>> {
        None
    }

    fn hessian(&self, _v: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    fn decay_exponent(&self) -> f64;

    fn amplitude(&self) -> f64;

    /// Radius of a ball around the origin on which the field vanishes.
    fn inner_void_radius(&self) -> Option<f64> {
        None
    }
}

impl<F: VelocityField + ?Sized> VelocityField for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        (**self).eval(v)
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        (**self).gradient(v)
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        (**self).hessian(v)
    }
    fn decay_exponent(&self) -> f64 {
        (**self).decay_exponent()
    }
    fn amplitude(&self) -> f64 {
        (**self).amplitude()
    }
    fn inner_void_radius(&self) -> Option<f64> {
        (**self).inner_void_radius()
    }
}

impl<F: VelocityField + ?Sized> VelocityField for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        (**self).eval(v)
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        (**self).gradient(v)
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        (**self).hessian(v)
    }
    fn decay_exponent(&self) -> f64 {
        (**self).decay_exponent()
    }
    fn amplitude(&self) -> f64 {
        (**self).amplitude()
    }
    fn inner_void_radius(&self) -> Option<f64> {
        (**self).inner_void_radius()
    }
}

/// Gradient and Hessian of a radial function g(|x|) from g, g', g''.
pub(crate) fn radial_derivatives(
    x: &[f64],
    r: f64,
    g1: f64,
    g2: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let d = x.len();
    let mut grad = DVector::zeros(d);
    let mut hess = DMatrix::zeros(d, d);
    if r == 0.0 {
        // smooth radial functions have g'(0) = 0 and Hessian g''(0) I
        for i in 0..d {
            hess[(i, i)] = g2;
        }
        return (grad, hess);
    }
    let over = g1 / r;
    for i in 0..d {
        grad[i] = over * x[i];
        for j in 0..d {
            let xx = x[i] * x[j] / (r * r);
            hess[(i, j)] = (g2 - over) * xx + if i == j { over } else { 0.0 };
        }
    }
    (grad, hess)
}

/// Scan r -> <r + shift>^m exp(-r^2 / (2 theta)) to bound Gaussian tails.
fn gaussian_weight_bound(m: f64, shift: f64, theta: f64) -> f64 {
    let top = shift + 10.0 * theta.sqrt() + m.sqrt() * 3.0 + 5.0;
    let n = 20_000;
    let mut best: f64 = 0.0;
    for k in 0..=n {
        let r = top * k as f64 / n as f64;
        let val = (0.5 * m * (1.0 + (r + shift).powi(2)).ln() - r * r / (2.0 * theta)).exp();
        best = best.max(val);
    }
    best * 1.01
}

/// Declared decay order for Gaussian-type fields.
pub const GAUSSIAN_DECLARED_DECAY: f64 = 12.0;

/// The zero field.
#[derive(Debug, Clone, Copy)]
pub struct ZeroField {
    pub dim: usize,
}

impl VelocityField for ZeroField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _v: &[f64]) -> f64 {
        0.0
    }
    fn gradient(&self, _v: &[f64]) -> Option<DVector<f64>> {
        Some(DVector::zeros(self.dim))
    }
    fn hessian(&self, _v: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.dim, self.dim))
    }
    fn decay_exponent(&self) -> f64 {
        f64::INFINITY
    }
    fn amplitude(&self) -> f64 {
        0.0
    }
}

/// Maxwellian rho (2 pi theta)^{-d/2} exp(-|v - u|^2 / (2 theta)).
#[derive(Debug, Clone)]
pub struct Maxwellian {
    pub rho: f64,
    pub u: Vec<f64>,
    pub theta: f64,
    peak: f64,
    amplitude: f64,
}

impl Maxwellian {
    pub fn new(rho: f64, u: &[f64], theta: f64) -> Result<Self> {
        let d = u.len();
        if !(2..=3).contains(&d) {
            return Err(KineticError::Unsupported(format!("Maxwellian in dimension {d}")));
        }
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(KineticError::Argument(format!("density must be >= 0, got {rho}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(KineticError::Domain(format!(
                "temperature must be positive, got {theta}; cold gas has no Maxwellian density"
            )));
        }
        let peak = rho * (2.0 * PI * theta).powf(-(d as f64) / 2.0);
        let amplitude = peak * gaussian_weight_bound(GAUSSIAN_DECLARED_DECAY, norm(u), theta);
        Ok(Maxwellian { rho, u: u.to_vec(), theta, peak, amplitude })
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(1.0, &vec![0.0; dim], 1.0).expect("standard Maxwellian is valid")
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    fn centered(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.u).map(|(a, b)| a - b).collect()
    }
}

impl VelocityField for Maxwellian {
    fn dim(&self) -> usize {
        self.u.len()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        let mut s = 0.0;
        for (a, b) in v.iter().zip(&self.u) {
            s += (a - b) * (a - b);
        }
        self.peak * (-s / (2.0 * self.theta)).exp()
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        let x = self.centered(v);
        let f = self.eval(v);
        Some(DVector::from_iterator(x.len(), x.iter().map(|xi| -xi / self.theta * f)))
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        let x = self.centered(v);
        let f = self.eval(v);
        let d = x.len();
        let t = self.theta;
        Some(DMatrix::from_fn(d, d, |i, j| {
            f * (x[i] * x[j] / (t * t) - if i == j { 1.0 / t } else { 0.0 })
        }))
    }
    fn decay_exponent(&self) -> f64 {
        GAUSSIAN_DECLARED_DECAY
    }
    fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// One isotropic Gaussian c exp(-|v - mu|^2 / (2 s^2)).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBump {
    pub weight: f64,
    pub center: Vec<f64>,
    pub width: f64,
}

/// Finite sum of isotropic Gaussians with nonnegative weights.
#[derive(Debug, Clone)]
pub struct GaussianMixture {
    dim: usize,
    bumps: Vec<GaussianBump>,
    amplitude: f64,
}

impl GaussianMixture {
    pub fn new(bumps: Vec<GaussianBump>) -> Result<Self> {
        let Some(first) = bumps.first() else {
            return Err(KineticError::Argument("a Gaussian mixture needs at least one bump".into()));
        };
        let dim = first.center.len();
        let mut amplitude = 0.0;
        for b in &bumps {
            if b.center.len() != dim {
                return Err(KineticError::Argument("bump centers differ in dimension".into()));
            }
            if !(b.weight >= 0.0 && b.width > 0.0) {
                return Err(KineticError::Argument(format!(
                    "bump weight must be >= 0 and width > 0, got {} and {}",
                    b.weight, b.width
                )));
            }
            amplitude += b.weight
                * gaussian_weight_bound(GAUSSIAN_DECLARED_DECAY, norm(&b.center), b.width * b.width);
        }
        Ok(GaussianMixture { dim, bumps, amplitude })
    }

    pub fn bumps(&self) -> &[GaussianBump] {
        &self.bumps
    }
}

impl VelocityField for GaussianMixture {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.bumps
            .iter()
            .map(|b| {
                let s: f64 = v.iter().zip(&b.center).map(|(a, c)| (a - c) * (a - c)).sum();
                b.weight * (-s / (2.0 * b.width * b.width)).exp()
            })
            .sum()
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        let mut g = DVector::zeros(self.dim);
        for b in &self.bumps {
            let s2 = b.width * b.width;
            let x: Vec<f64> = v.iter().zip(&b.center).map(|(a, c)| a - c).collect();
            let val = b.weight * (-norm_sq(&x) / (2.0 * s2)).exp();
            for i in 0..self.dim {
                g[i] -= x[i] / s2 * val;
            }
        }
        Some(g)
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for b in &self.bumps {
            let s2 = b.width * b.width;
            let x: Vec<f64> = v.iter().zip(&b.center).map(|(a, c)| a - c).collect();
            let val = b.weight * (-norm_sq(&x) / (2.0 * s2)).exp();
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let delta = if i == j { 1.0 / s2 } else { 0.0 };
                    h[(i, j)] += val * (x[i] * x[j] / (s2 * s2) - delta);
                }
            }
        }
        Some(h)
    }
    fn decay_exponent(&self) -> f64 {
        GAUSSIAN_DECLARED_DECAY
    }
    fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// Smooth compactly supported bump c exp(1 - 1/(1 - |v - mu|^2/R^2)).
#[derive(Debug, Clone)]
pub struct CompactBump {
    pub height: f64,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl CompactBump {
    pub fn new(height: f64, center: &[f64], radius: f64) -> Result<Self> {
        if !(height >= 0.0 && radius > 0.0) {
            return Err(KineticError::Argument(format!(
                "bump height must be >= 0 and radius > 0, got {height} and {radius}"
            )));
        }
        Ok(CompactBump { height, center: center.to_vec(), radius })
    }

    /// Profile g(r) and its first two derivatives.
    fn profile(&self, r: f64) -> (f64, f64, f64) {
        let rr = self.radius;
        let t = (r / rr).powi(2);
        if t >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let q = 1.0 - t;
        let g = self.height * (1.0 - 1.0 / q).exp();
        // d/dr of -1/q = -(2r/R^2)/q^2
        let a = -2.0 * r / (rr * rr) / (q * q);
        let g1 = g * a;
        // da/dr = -2/(R^2 q^2) - 8 r^2/(R^4 q^3)
        let da = -2.0 / (rr * rr * q * q) - 8.0 * r * r / (rr.powi(4) * q.powi(3));
        let g2 = g * (a * a + da);
        (g, g1, g2)
    }
}

impl VelocityField for CompactBump {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        let x: Vec<f64> = v.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        self.profile(norm(&x)).0
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        let x: Vec<f64> = v.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let r = norm(&x);
        let (_, g1, g2) = self.profile(r);
        Some(radial_derivatives(&x, r, g1, g2).0)
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        let x: Vec<f64> = v.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let r = norm(&x);
        let (_, g1, g2) = self.profile(r);
        Some(radial_derivatives(&x, r, g1, g2).1)
    }
    fn decay_exponent(&self) -> f64 {
        f64::INFINITY
    }
    fn amplitude(&self) -> f64 {
        self.height
    }
}

/// C^2 quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 on [0, 1] with derivatives.
pub fn smoothstep(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let t2 = t * t;
    let s = t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
    let s1 = 30.0 * t2 * (1.0 - t) * (1.0 - t);
    let s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    (s, s1, s2)
}

/// Radial window w(|v|) that rises from 0 to 1 on [inner0, inner1] and
/// falls back to 0 on [outer0, outer1]. Either side may be disabled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWindow {
    pub rise: Option<(f64, f64)>,
    pub fall: Option<(f64, f64)>,
}

impl RadialWindow {
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        let (mut w, mut w1, mut w2) = (1.0, 0.0, 0.0);
        if let Some((a, b)) = self.rise {
            let l = b - a;
            let (s, s1, s2) = smoothstep((r - a) / l);
            (w, w1, w2) = (s, s1 / l, s2 / (l * l));
        }
        if let Some((a, b)) = self.fall {
            let l = b - a;
            // 1 - S(t) = S(1 - t) keeps the tail exactly nonnegative
            let (u, s1, s2) = smoothstep((b - r) / l);
            let (u1, u2) = (-s1 / l, s2 / (l * l));
            (w, w1, w2) = (w * u, w1 * u + w * u1, w2 * u + 2.0 * w1 * u1 + w * u2);
        }
        (w, w1, w2)
    }
}

/// A field multiplied by a radial window about the origin.
#[derive(Clone)]
pub struct Windowed<F> {
    pub inner: F,
    pub window: RadialWindow,
}

impl<F: VelocityField> Windowed<F> {
    pub fn new(inner: F, window: RadialWindow) -> Self {
        Windowed { inner, window }
    }
}

impl<F: VelocityField> VelocityField for Windowed<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        let (w, _, _) = self.window.eval(norm(v));
        if w == 0.0 {
            0.0
        } else {
            w * self.inner.eval(v)
        }
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        let r = norm(v);
        let (w, w1, w2) = self.window.eval(r);
        if w == 0.0 && w1 == 0.0 {
            return Some(DVector::zeros(v.len()));
        }
        let g = self.inner.gradient(v)?;
        let (wg, _) = radial_derivatives(v, r, w1, w2);
        Some(g * w + wg * self.inner.eval(v))
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        let r = norm(v);
        let (w, w1, w2) = self.window.eval(r);
        if w == 0.0 && w1 == 0.0 && w2 == 0.0 {
            return Some(DMatrix::zeros(v.len(), v.len()));
        }
        let f = self.inner.eval(v);
        let g = self.inner.gradient(v)?;
        let h = self.inner.hessian(v)?;
        let (wg, wh) = radial_derivatives(v, r, w1, w2);
        Some(h * w + &g * wg.transpose() + &wg * g.transpose() + wh * f)
    }
    fn decay_exponent(&self) -> f64 {
        if self.window.fall.is_some() {
            f64::INFINITY
        } else {
            self.inner.decay_exponent()
        }
    }
    fn amplitude(&self) -> f64 {
        self.inner.amplitude()
    }
    fn inner_void_radius(&self) -> Option<f64> {
        match (self.window.rise, self.inner.inner_void_radius()) {
            (Some((a, _)), Some(b)) => Some(a.max(b)),
            (Some((a, _)), None) if a > 0.0 => Some(a),
            (_, other) => other,
        }
    }
}

/// alpha f(lambda v).
#[derive(Clone)]
pub struct Scaled<F> {
    pub inner: F,
    pub alpha: f64,
    pub lambda: f64,
}

impl<F: VelocityField> Scaled<F> {
    pub fn new(inner: F, alpha: f64, lambda: f64) -> Self {
        Scaled { inner, alpha, lambda }
    }

    fn arg(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| x * self.lambda).collect()
    }
}

impl<F: VelocityField> VelocityField for Scaled<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.alpha * self.inner.eval(&self.arg(v))
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        Some(self.inner.gradient(&self.arg(v))? * (self.alpha * self.lambda))
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        Some(self.inner.hessian(&self.arg(v))? * (self.alpha * self.lambda * self.lambda))
    }
    fn decay_exponent(&self) -> f64 {
        self.inner.decay_exponent()
    }
    fn amplitude(&self) -> f64 {
        let m = self.inner.decay_exponent();
        let l = self.lambda;
        // <v>^{-m}... bound: <lambda v>^{-m} <= max(1, lambda^{-m}) <v>^{-m}
        let factor = if m.is_finite() { l.powf(-m).max(1.0) } else { 1.0 };
        self.alpha * self.inner.amplitude() * factor
    }
    fn inner_void_radius(&self) -> Option<f64> {
        self.inner.inner_void_radius().map(|r| r / self.lambda)
    }
}

/// f(v - shift).
#[derive(Clone)]
pub struct Shifted<F> {
    pub inner: F,
    pub shift: Vec<f64>,
}

impl<F: VelocityField> Shifted<F> {
    pub fn new(inner: F, shift: &[f64]) -> Self {
        Shifted { inner, shift: shift.to_vec() }
    }

    fn arg(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.shift).map(|(a, s)| a - s).collect()
    }
}

impl<F: VelocityField> VelocityField for Shifted<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.inner.eval(&self.arg(v))
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        self.inner.gradient(&self.arg(v))
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        self.inner.hessian(&self.arg(v))
    }
    fn decay_exponent(&self) -> f64 {
        self.inner.decay_exponent()
    }
    fn amplitude(&self) -> f64 {
        let m = self.inner.decay_exponent();
        if m.is_finite() {
            // <v - s>^{-m} <= 2^{m/2} <s>^m <v>^{-m} (Peetre)
            self.inner.amplitude() * 2f64.powf(m / 2.0) * crate::field::bracket(&self.shift).powf(m)
        } else {
            self.inner.amplitude()
        }
    }
}

/// Supplies derivatives of a black-box field by central differences with
/// step h = rel_tol^{1/3} <v> unless an explicit step is given.
#[derive(Clone)]
pub struct FiniteDifference<F> {
    pub inner: F,
    pub rel_tol: f64,
    pub step: Option<f64>,
}

impl<F: VelocityField> FiniteDifference<F> {
    pub fn new(inner: F, rel_tol: f64) -> Self {
        FiniteDifference { inner, rel_tol, step: None }
    }

    pub fn with_step(inner: F, step: f64) -> Self {
        FiniteDifference { inner, rel_tol: 0.0, step: Some(step) }
    }

    pub fn step_at(&self, v: &[f64]) -> f64 {
        self.step.unwrap_or_else(|| self.rel_tol.cbrt() * bracket(v))
    }
}

impl<F: VelocityField> VelocityField for FiniteDifference<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.inner.eval(v)
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        let h = self.step_at(v);
        let d = v.len();
        let mut p = v.to_vec();
        Some(DVector::from_fn(d, |i, _| {
            p[i] = v[i] + h;
            let fp = self.inner.eval(&p);
            p[i] = v[i] - h;
            let fm = self.inner.eval(&p);
            p[i] = v[i];
            (fp - fm) / (2.0 * h)
        }))
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        let h = self.step_at(v);
        let d = v.len();
        let f0 = self.inner.eval(v);
        let mut p = v.to_vec();
        let mut hess = DMatrix::zeros(d, d);
        for i in 0..d {
            p[i] = v[i] + h;
            let fp = self.inner.eval(&p);
            p[i] = v[i] - h;
            let fm = self.inner.eval(&p);
            p[i] = v[i];
            hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in 0..i {
                let mut corner = |si: f64, sj: f64| {
                    p[i] = v[i] + si * h;
                    p[j] = v[j] + sj * h;
                    let val = self.inner.eval(&p);
                    p[i] = v[i];
                    p[j] = v[j];
                    val
                };
                let val = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                    + corner(-1.0, -1.0))
                    / (4.0 * h * h);
                hess[(i, j)] = val;
                hess[(j, i)] = val;
            }
        }
        Some(hess)
    }
    fn decay_exponent(&self) -> f64 {
        self.inner.decay_exponent()
    }
    fn amplitude(&self) -> f64 {
        self.inner.amplitude()
    }
    fn inner_void_radius(&self) -> Option<f64> {
        self.inner.inner_void_radius()
    }
}

type FieldFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A field given by a closure, with caller-declared decay metadata.
#[derive(Clone)]
pub struct FnField {
    dim: usize,
    f: Arc<FieldFn>,
    decay: f64,
    amplitude: f64,
    void_radius: Option<f64>,
}

impl FnField {
    pub fn new(
        dim: usize,
        decay: f64,
        amplitude: f64,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FnField { dim, f: Arc::new(f), decay, amplitude, void_radius: None }
    }

    pub fn with_void_radius(mut self, radius: f64) -> Self {
        self.void_radius = Some(radius);
        self
    }
}

impl VelocityField for FnField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, v: &[f64]) -> f64 {
        (self.f)(v)
    }
    fn decay_exponent(&self) -> f64 {
        self.decay
    }
    fn amplitude(&self) -> f64 {
        self.amplitude
    }
    fn inner_void_radius(&self) -> Option<f64> {
        self.void_radius
    }
}

/// Sampled check of the VelocityField invariants on the given points.
pub fn check_field_invariants(f: &dyn VelocityField, points: &[Vec<f64>]) -> Result<()> {
    let m = f.decay_exponent();
    let a = f.amplitude();
    for v in points {
        let val = f.eval(v);
        if !val.is_finite() {
            return Err(KineticError::Evaluation { at: v.clone(), value: val });
        }
        if val < 0.0 {
            return Err(KineticError::Configuration(format!("field is negative ({val}) at {v:?}")));
        }
        if m.is_finite() && val * bracket(v).powf(m) > a * (1.0 + 1e-12) {
            return Err(KineticError::Configuration(format!(
                "declared decay bound A <v>^-m violated at {v:?}"
            )));
        }
        if let Some(r0) = f.inner_void_radius() {
            if norm(v) < r0 && val != 0.0 {
                return Err(KineticError::Configuration(format!(
                    "field is nonzero inside the declared void |v| < {r0} at {v:?}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd_check(f: &dyn VelocityField, v: &[f64]) {
        let fd = FiniteDifference::with_step(f, 1e-4);
        let g = f.gradient(v).unwrap();
        let gf = fd.gradient(v).unwrap();
        let h = f.hessian(v).unwrap();
        let hf = fd.hessian(v).unwrap();
        let scale = h.abs().max() + 1e-12;
        assert!((g - gf).abs().max() <= 1e-6 * scale.max(1e-3), "gradient mismatch at {v:?}");
        assert!((h - hf).abs().max() <= 1e-5 * scale, "hessian mismatch at {v:?}");
    }

    #[test]
    fn maxwellian_peak() {
        let m = Maxwellian::standard(3);
        assert_relative_eq!(m.eval(&[0.0, 0.0, 0.0]), (2.0 * PI).powf(-1.5), max_relative = 1e-15);
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let m = Maxwellian::new(1.3, &[0.2, -0.1, 0.3], 0.8).unwrap();
        fd_check(&m, &[0.4, 0.5, -0.7]);
        let g = GaussianMixture::new(vec![
            GaussianBump { weight: 1.0, center: vec![0.5, 0.0, 0.0], width: 0.6 },
            GaussianBump { weight: 0.5, center: vec![-0.5, 0.3, 0.0], width: 0.9 },
        ])
        .unwrap();
        fd_check(&g, &[0.1, 0.2, 0.3]);
        let b = CompactBump::new(1.0, &[0.1, 0.0, 0.0], 2.0).unwrap();
        fd_check(&b, &[0.5, -0.4, 0.3]);
        let w = Windowed::new(
            m.clone(),
            RadialWindow { rise: Some((0.2, 0.6)), fall: Some((1.5, 2.5)) },
        );
        fd_check(&w, &[0.3, 0.2, 0.1]);
        fd_check(&w, &[1.2, 0.9, 0.4]);
        let s = Scaled::new(g.clone(), 2.0, 0.5);
        fd_check(&s, &[0.3, -0.6, 0.8]);
        let sh = Shifted::new(b, &[0.3, 0.3, 0.0]);
        fd_check(&sh, &[0.7, 0.1, 0.2]);
    }

    #[test]
    fn declared_decay_bounds_hold() {
        let m = Maxwellian::new(2.0, &[1.0, 0.0, 0.0], 0.5).unwrap();
        let pts: Vec<Vec<f64>> = (0..200).map(|k| vec![k as f64 * 0.05, 0.0, 0.0]).collect();
        check_field_invariants(&m, &pts).unwrap();
    }

    #[test]
    fn smoothstep_endpoints() {
        assert_eq!(smoothstep(0.0).0, 0.0);
        assert_eq!(smoothstep(1.0).0, 1.0);
        assert_relative_eq!(smoothstep(0.5).0, 0.5);
    }
}
