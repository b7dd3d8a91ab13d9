//! The comparison barrier alpha b1(v), equal to alpha |v|^{-m} for |v| >= 1/2.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::field::VelocityField;

/// Radius where the inner profile hands over to the pure power.
pub const MATCH_RADIUS: f64 = 0.5;
const MATCH_S: f64 = MATCH_RADIUS * MATCH_RADIUS;
const PROFILE_DEGREE: usize = 5;

/// Shape of b1 inside |v| < 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InnerProfile {
    /// Quintic polynomial in s = |v|^2: the degree-5 Taylor expansion of
    /// s^{-m/2} about s = 1/4.
    Quintic([f64; PROFILE_DEGREE + 1]),
    /// |v|^{-m} everywhere, singular at the origin.
    PurePower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    pub m: f64,
    pub alpha: f64,
    pub inner: InnerProfile,
}

/// Which derivative [`Barrier::eval`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierOrder {
    Value,
    Gradient,
    Hessian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BarrierOutput {
    Value(f64),
    Gradient(DVector<f64>),
    Hessian(DMatrix<f64>),
}

/// Smooth barrier with the quintic inner profile.
pub fn make_barrier(m: f64, alpha: f64) -> Result<Barrier> {
    check_params(m, alpha)?;
    let mut coeffs = [0.0; PROFILE_DEGREE + 1];
    // c_k = binom(-m/2, k) s0^{-m/2 - k}
    let mut binom = 1.0;
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k > 0 {
            binom *= (-m / 2.0 - (k as f64 - 1.0)) / k as f64;
        }
        *c = binom * MATCH_S.powf(-m / 2.0 - k as f64);
    }
    let barrier = Barrier { m, alpha, inner: InnerProfile::Quintic(coeffs) };
    barrier.verify_profile()?;
    Ok(barrier)
}

/// Barrier alpha |v|^{-m} on all of R^d \ {0}.
pub fn pure_power_barrier(m: f64, alpha: f64) -> Result<Barrier> {
    check_params(m, alpha)?;
    Ok(Barrier { m, alpha, inner: InnerProfile::PurePower })
}

fn check_params(m: f64, alpha: f64) -> Result<()> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(KineticError::Argument(format!("barrier exponent m must be > 0, got {m}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(KineticError::Argument(format!(
            "barrier amplitude alpha must be > 0, got {alpha}"
        )));
    }
    Ok(())
}

impl Barrier {
    /// b1 as a function of s = |v|^2, with d/ds and d^2/ds^2.
    fn profile_s(&self, s: f64) -> (f64, f64, f64) {
        let m = self.m;
        match self.inner {
            InnerProfile::Quintic(c) if s < MATCH_S => {
                let x = s - MATCH_S;
                let mut p = 0.0;
                let mut p1 = 0.0;
                let mut p2 = 0.0;
                for k in (0..=PROFILE_DEGREE).rev() {
                    p = p * x + c[k];
                    if k >= 1 {
                        p1 = p1 * x + k as f64 * c[k];
                    }
                    if k >= 2 {
                        p2 = p2 * x + (k * (k - 1)) as f64 * c[k];
                    }
                }
                (p, p1, p2)
            }
            _ => {
                let p = s.powf(-m / 2.0);
                let p1 = -m / 2.0 * p / s;
                let p2 = (-m / 2.0) * (-m / 2.0 - 1.0) * p / (s * s);
                (p, p1, p2)
            }
        }
    }

    /// b1(v) without the amplitude.
    pub fn shape(&self, v: &[f64]) -> f64 {
        self.profile_s(v.iter().map(|x| x * x).sum()).0
    }

    pub fn value(&self, v: &[f64]) -> f64 {
        self.alpha * self.shape(v)
    }

    pub fn gradient(&self, v: &[f64]) -> Result<DVector<f64>> {
        let s: f64 = v.iter().map(|x| x * x).sum();
        self.check_smooth_at(s, v)?;
        let (_, p1, _) = self.profile_s(s);
        Ok(DVector::from_iterator(v.len(), v.iter().map(|x| 2.0 * self.alpha * p1 * x)))
    }

    pub fn hessian(&self, v: &[f64]) -> Result<DMatrix<f64>> {
        let s: f64 = v.iter().map(|x| x * x).sum();
        self.check_smooth_at(s, v)?;
        let d = v.len();
        if s >= MATCH_S || self.inner == InnerProfile::PurePower {
            // alpha m |v|^{-m-2} [(m+2) v v^T/|v|^2 - I]
            let m = self.m;
            let pre = self.alpha * m * s.powf(-m / 2.0) / s;
            return Ok(DMatrix::from_fn(d, d, |i, j| {
                pre * ((m + 2.0) * v[i] * v[j] / s - if i == j { 1.0 } else { 0.0 })
            }));
        }
        let (_, p1, p2) = self.profile_s(s);
        Ok(DMatrix::from_fn(d, d, |i, j| {
            self.alpha * (4.0 * p2 * v[i] * v[j] + if i == j { 2.0 * p1 } else { 0.0 })
        }))
    }

    pub fn eval(&self, v: &[f64], order: BarrierOrder) -> Result<BarrierOutput> {
        match order {
            BarrierOrder::Value => {
                let val = self.value(v);
                if !val.is_finite() {
                    return Err(KineticError::Domain(format!(
                        "pure-power barrier is singular at v = {v:?}"
                    )));
                }
                Ok(BarrierOutput::Value(val))
            }
            BarrierOrder::Gradient => self.gradient(v).map(BarrierOutput::Gradient),
            BarrierOrder::Hessian => self.hessian(v).map(BarrierOutput::Hessian),
        }
    }

    fn check_smooth_at(&self, s: f64, v: &[f64]) -> Result<()> {
        if s == 0.0 && self.inner == InnerProfile::PurePower {
            return Err(KineticError::Domain(format!(
                "derivatives of the pure-power barrier do not exist at v = {v:?}"
            )));
        }
        Ok(())
    }

    /// Dense radial scan of positivity, monotonicity and dominance by r^{-m}.
    fn verify_profile(&self) -> Result<()> {
        let n = 2000;
        let mut prev = f64::INFINITY;
        for k in 0..=n {
            let r = MATCH_RADIUS * k as f64 / n as f64;
            let (p, p1, _) = self.profile_s(r * r);
            if !(p > 0.0) || p1 > 0.0 || p > prev {
                return Err(KineticError::Argument(format!(
                    "inner barrier profile for m = {} is not positive and non-increasing at r = {r}",
                    self.m
                )));
            }
            if r > 0.0 && p > r.powf(-self.m) * (1.0 + 1e-12) {
                return Err(KineticError::Argument(format!(
                    "inner barrier profile for m = {} exceeds r^-m at r = {r}",
                    self.m
                )));
            }
            prev = p;
        }
        Ok(())
    }
}

/// A barrier viewed as a velocity field in a fixed dimension.
#[derive(Debug, Clone, Copy)]
pub struct BarrierField {
    pub barrier: Barrier,
    pub dim: usize,
}

impl VelocityField for BarrierField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, v: &[f64]) -> f64 {
        self.barrier.value(v)
    }
    fn gradient(&self, v: &[f64]) -> Option<DVector<f64>> {
        self.barrier.gradient(v).ok()
    }
    fn hessian(&self, v: &[f64]) -> Option<DMatrix<f64>> {
        self.barrier.hessian(v).ok()
    }
    fn decay_exponent(&self) -> f64 {
        self.barrier.m
    }
    fn amplitude(&self) -> f64 {
        // <v>^m b1(v) peaks where the profile is largest relative to <v>^{-m}
        let n = 4000;
        let mut best: f64 = 0.0;
        for k in 0..=n {
            let r = 4.0 * k as f64 / n as f64;
            let val = (1.0 + r * r).powf(self.barrier.m / 2.0) * self.barrier.shape(&[r]);
            best = best.max(val);
        }
        if self.barrier.inner == InnerProfile::PurePower {
            f64::INFINITY
        } else {
            self.barrier.alpha * best.max(2f64.powf(self.barrier.m / 2.0)) * 1.001
        }
    }
}
