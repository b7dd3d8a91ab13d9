use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::field::{Maxwellian, VelocityField};
use crate::quadrature::{norm3, CenteredBallRule, SphereRule};
use crate::scheme::QuadratureScheme;

/// Densities below this are reported as vacuum by [`maxwellian_moments`].
pub const VACUUM_DENSITY: f64 = 1e-14;

/// Hydrodynamic state of a monatomic gas with unit Boltzmann constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerState {
    rho: f64,
    u: [f64; 3],
    theta: f64,
    cold: bool,
}

impl EulerState {
    pub fn new(rho: f64, u: [f64; 3], theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(KineticError::Domain(format!(
                "temperature must be positive, got {theta}; use EulerState::cold for theta = 0"
            )));
        }
        Self::checked(rho, u, theta, false)
    }

    /// Zero-temperature state. It has no Maxwellian: the velocity
    /// distribution of cold gas is a Dirac mass at u.
    pub fn cold(rho: f64, u: [f64; 3]) -> Result<Self> {
        Self::checked(rho, u, 0.0, true)
    }

    fn checked(rho: f64, u: [f64; 3], theta: f64, cold: bool) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(KineticError::Argument(format!("density must be >= 0, got {rho}")));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(KineticError::Argument(format!("velocity must be finite, got {u:?}")));
        }
        Ok(EulerState { rho, u, theta, cold })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn u(&self) -> [f64; 3] {
        self.u
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_cold(&self) -> bool {
        self.cold
    }

    /// p = rho theta.
    pub fn pressure(&self) -> f64 {
        self.rho * self.theta
    }

    /// Specific total energy E = 3 theta / 2 + |u|^2 / 2.
    pub fn energy(&self) -> f64 {
        1.5 * self.theta + 0.5 * norm3(&self.u).powi(2)
    }

    /// Specific entropy S = log(2 rho^{2/3} / (3 theta)).
    pub fn entropy(&self) -> Result<f64> {
        self.reject_cold()?;
        Ok((2.0 * self.rho.powf(2.0 / 3.0) / (3.0 * self.theta)).ln())
    }

    fn reject_cold(&self) -> Result<()> {
        if self.cold {
            return Err(KineticError::Domain(
                "cold gas (theta = 0): the velocity distribution is a Dirac mass, not a Maxwellian".into(),
            ));
        }
        Ok(())
    }
}

/// v -> rho (2 pi theta)^{-3/2} exp(-|v - u|^2 / (2 theta)), with exact derivatives.
pub fn maxwellian_field(state: &EulerState) -> Result<Maxwellian> {
    state.reject_cold()?;
    Maxwellian::new(state.rho, &state.u, state.theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MomentOutcome {
    /// Density below [`VACUUM_DENSITY`]: u and theta are undefined.
    Vacuum { rho: f64 },
    State(EulerState),
}

fn moments_about(
    f: &dyn VelocityField,
    center: &[f64; 3],
    q: &QuadratureScheme,
    sphere: &SphereRule,
) -> Result<(f64, [f64; 3], f64)> {
    let rule = CenteredBallRule::new(3, center, q.outer_radius, q.polar_radius, 0.0, 4 * q.radial_nodes, sphere);
    let mut mass = 0.0;
    let mut first = [0.0; 3];
    let mut second = 0.0;
    for node in &rule.nodes {
        let v = &node.point[..3];
        let val = f.eval(v);
        if !val.is_finite() {
            return Err(KineticError::Evaluation { at: v.to_vec(), value: val });
        }
        let w = node.weight * val;
        mass += w;
        for i in 0..3 {
            first[i] += w * v[i];
        }
        second += w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
    Ok((mass, first, second))
}

/// rho = int f, rho u = int v f, 3 rho theta = int |v - u|^2 f over the ball
/// of radius outer_radius, recentred once on the first estimate of u.
pub fn maxwellian_moments(f: &dyn VelocityField, q: &QuadratureScheme) -> Result<MomentOutcome> {
    q.validate()?;
    if f.dim() != 3 {
        return Err(KineticError::Unsupported(format!("moments are three-dimensional, got d = {}", f.dim())));
    }
    if !(f.decay_exponent() > 5.0) {
        return Err(KineticError::Argument(format!(
            "second moment needs decay exponent > 5, got {}",
            f.decay_exponent()
        )));
    }
    let sphere = SphereRule::new(3, 2 * q.angular_nodes);
    let mut center = [0.0; 3];
    let mut out = (0.0, [0.0; 3], 0.0);
    for _ in 0..2 {
        out = moments_about(f, &center, q, &sphere)?;
        if out.0.abs() < VACUUM_DENSITY {
            return Ok(MomentOutcome::Vacuum { rho: out.0 });
        }
        center = out.1.map(|x| x / out.0);
    }
    let (rho, first, second) = out;
    let u = first.map(|x| x / rho);
    let theta = (second / rho - norm3(&u).powi(2)) / 3.0;
    Ok(MomentOutcome::State(EulerState::new(rho, u, theta)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBound {
    /// rho^{2/3} <= C theta at the tested state.
    pub holds: bool,
    /// C = (3/2) exp(max S over the initial states).
    pub constant: f64,
    /// C theta - rho^{2/3}, relative to rho^{2/3}.
    pub margin: f64,
}

/// Maximum principle for the specific entropy: the prefactor bound
/// rho^{2/3} <= C theta inherited from the initial states.
pub fn entropy_bound(states0: &[EulerState], state_t: &EulerState) -> Result<EntropyBound> {
    if states0.is_empty() {
        return Err(KineticError::Argument("at least one initial state is required".into()));
    }
    let mut s_max = f64::NEG_INFINITY;
    for s in states0 {
        s_max = s_max.max(s.entropy()?);
    }
    state_t.reject_cold()?;
    let constant = 1.5 * s_max.exp();
    let lhs = state_t.rho.powf(2.0 / 3.0);
    let rhs = constant * state_t.theta;
    let margin = if lhs > 0.0 { (rhs - lhs) / lhs } else { f64::INFINITY };
    // rounding slack for the equality case
    Ok(EntropyBound { holds: margin >= -1e-12, constant, margin })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellianNorm {
    /// sup_v <v>^{3+gamma} M(v).
    pub value: f64,
    /// |v| at the maximizer, which lies on the ray through u.
    pub argmax_radius: f64,
    /// rho (2 pi theta)^{-3/2}.
    pub prefactor: f64,
    /// 1 + theta^{(3+gamma)/2} + |u|^{3+gamma}.
    pub three_term: f64,
    /// Explicit constant with value <= prefactor * constant * three_term.
    pub constant: f64,
}

/// Weighted sup norm of the Maxwellian of `state`. For fixed |v| = r the
/// Gaussian factor is largest on the ray through u, so the sup reduces to
/// max_r <r>^k exp(-(r - |u|)^2 / (2 theta)) with k = 3 + gamma; the
/// maximizer lies in [|u|, |u| + k theta / 2].
pub fn maxwellian_weighted_norm(state: &EulerState, gamma: f64) -> Result<MaxwellianNorm> {
    state.reject_cold()?;
    if !(-3.0..=1.0).contains(&gamma) {
        return Err(KineticError::Argument(format!("gamma must lie in [-3, 1], got {gamma}")));
    }
    let k = 3.0 + gamma;
    let theta = state.theta;
    let speed = norm3(&state.u);
    let prefactor = state.rho * (2.0 * std::f64::consts::PI * theta).powf(-1.5);
    let log_g = |r: f64| 0.5 * k * (1.0 + r * r).ln() - (r - speed).powi(2) / (2.0 * theta);
    let (lo, hi) = (speed, speed + 0.5 * k * theta);
    let samples = 2000;
    let mut best = (log_g(lo), lo);
    for i in 1..=samples {
        let r = lo + (hi - lo) * i as f64 / samples as f64;
        let val = log_g(r);
        if val > best.0 {
            best = (val, r);
        }
    }
    // golden-section refinement around the best sample
    let step = (hi - lo) / samples as f64;
    let (mut a, mut b) = ((best.1 - step).max(lo), (best.1 + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-14 * (1.0 + b) {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        if log_g(c) >= log_g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let r = 0.5 * (a + b);
    let (log_best, argmax_radius) = if log_g(r) > best.0 { (log_g(r), r) } else { best };
    let p = 0.5 * k;
    // <v>^k <= 3^{max(p-1,0)} (1 + 2^p |v-u|^k + 2^p |u|^k), sup_a a^k e^{-a^2/2theta} = (k theta / e)^{k/2}
    let constant = 3f64.powf((p - 1.0).max(0.0)) * 2f64.powf(p) * (k / std::f64::consts::E).powf(p).max(1.0);
    Ok(MaxwellianNorm {
        value: prefactor * log_best.exp(),
        argmax_radius,
        prefactor,
        three_term: 1.0 + theta.powf(p) + speed.powf(k),
        constant,
    })
}
