//! The Landau small-velocity integrand
//! G(w) = m |e - w|^2 [(m+2) Pi(e - w) e.e - (d-1)] + (d-1)(d+gamma)
//! and the largest ball B_delta on which it stays non-positive.

use crate::error::{KineticError, Result};
use crate::verify::report::ThresholdReport;

fn check_args(m: f64, d: usize, gamma: f64) -> Result<()> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(KineticError::Argument(format!("m must be positive, got {m}")));
    }
    if d < 2 {
        return Err(KineticError::Argument(format!("dimension must be at least 2, got {d}")));
    }
    if !gamma.is_finite() {
        return Err(KineticError::Argument("gamma must be finite".into()));
    }
    Ok(())
}

/// G at w = a (cos psi e + sin psi e_perp), written through c = cos psi:
/// |e-w|^2 Pi(e-w)e.e = a^2 (1 - c^2).
pub fn landau_integrand(m: f64, d: usize, gamma: f64, a: f64, c: f64) -> f64 {
    let dm1 = d as f64 - 1.0;
    let s2 = (1.0 - c * c).max(0.0);
    m * ((m + 2.0) * a * a * s2 - dm1 * (1.0 - 2.0 * a * c + a * a)) + dm1 * (d as f64 + gamma)
}

/// G(0) = (d-1)(d+gamma-m).
pub fn landau_integrand_at_origin(m: f64, d: usize, gamma: f64) -> f64 {
    landau_integrand(m, d, gamma, 0.0, 1.0)
}

/// max over the sphere |w| = a, attained at cos psi = (d-1)/((m+2)a) clamped to [-1, 1].
pub fn landau_ring_max(m: f64, d: usize, gamma: f64, a: f64) -> (f64, f64) {
    let c = if a == 0.0 { 1.0 } else { ((d as f64 - 1.0) / ((m + 2.0) * a)).clamp(-1.0, 1.0) };
    (landau_integrand(m, d, gamma, a, c), c)
}

/// Sup of G over the (|w|, angle) grid of B_delta: `grid_n` + 1 radii and
/// `grid_n` + 1 angles in [0, pi], plus the exact angular maximizer on each
/// sampled radius.
pub fn landau_integrand_sup(m: f64, d: usize, gamma: f64, delta: f64, grid_n: usize) -> Result<f64> {
    check_args(m, d, gamma)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(KineticError::Argument(format!("delta must lie in (0, 1), got {delta}")));
    }
    if grid_n < 1 {
        return Err(KineticError::Argument("grid_n must be positive".into()));
    }
    Ok(sup_unchecked(m, d, gamma, delta, grid_n))
}

fn sup_unchecked(m: f64, d: usize, gamma: f64, delta: f64, grid_n: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=grid_n {
        let a = delta * i as f64 / grid_n as f64;
        best = best.max(landau_ring_max(m, d, gamma, a).0);
        for j in 0..=grid_n {
            let psi = std::f64::consts::PI * j as f64 / grid_n as f64;
            best = best.max(landau_integrand(m, d, gamma, a, psi.cos()));
        }
    }
    best
}

/// Radial resolution of the sup used inside the delta search.
const SEARCH_GRID: usize = 400;
const DELTA_CAP: f64 = 1.0 - 1e-9;

/// Largest delta (to relative tolerance `rel_tol`) with sup_{B_delta} G <= 0.
pub fn landau_delta_search(m: f64, d: usize, gamma: f64, rel_tol: f64) -> Result<ThresholdReport> {
    check_args(m, d, gamma)?;
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(KineticError::Argument(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    let g0 = landau_integrand_at_origin(m, d, gamma);
    if m <= d as f64 + gamma || g0 >= 0.0 {
        return Err(KineticError::Infeasible(format!(
            "m = {m} does not exceed d + gamma = {}: G(0) = (d-1)(d+gamma-m) = {g0} is not negative, so no ball around w = 0 works",
            d as f64 + gamma
        )));
    }
    // Exact radial maximum on [0, delta]: ring maxima on a fine grid.
    let sup = |delta: f64| -> f64 {
        let mut best = g0;
        for i in 1..=SEARCH_GRID {
            let a = delta * i as f64 / SEARCH_GRID as f64;
            best = best.max(landau_ring_max(m, d, gamma, a).0);
        }
        best
    };
    let report_grid = |r: ThresholdReport| {
        r.with_grid("radial_samples", SEARCH_GRID as u64)
            .with_grid("angular", "exact ring maximum")
            .with_grid("rel_tol", rel_tol)
            .with_grid("d", d as u64)
            .with_grid("gamma", gamma)
            .with_grid("m", m)
    };
    if sup(DELTA_CAP) <= 0.0 {
        let r = ThresholdReport::new("delta", DELTA_CAP)
            .certify("G(0)", &[0.0], g0)
            .certify("sup G on B_delta", &[DELTA_CAP], sup(DELTA_CAP));
        return Ok(report_grid(r));
    }
    let mut lo = 0.0;
    let mut hi = DELTA_CAP;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if sup(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if lo > 0.0 && hi - lo <= rel_tol * lo {
            break;
        }
    }
    if !(lo > 0.0) {
        return Err(KineticError::SearchFailed(format!(
            "bisection did not isolate a positive delta for m = {m}"
        )));
    }
    let above = (1.05 * lo).min(DELTA_CAP);
    let r = ThresholdReport::new("delta", lo)
        .certify("G(0)", &[0.0], g0)
        .certify("sup G on B_delta", &[lo], sup(lo))
        .certify("sup G on B_{1.05 delta}", &[above], sup(above));
    Ok(report_grid(r))
}
