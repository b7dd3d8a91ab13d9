//! A priori bound checks on logged norm trajectories.

use serde::Serialize;

use crate::error::{KineticError, Result};
use crate::homog::solver::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GronwallCheck {
    pub holds: bool,
    /// ||f_in||_m exp(C int_0^t ||f||_{d+gamma}) - ||f(t)||_m per record.
    pub margins: Vec<f64>,
}

/// ||f(t)||_m <= ||f_in||_m exp(C int_0^t ||f(s)||_{d+gamma} ds), the
/// integral by the trapezoid rule over the logged times.
pub fn gronwall_check(records: &[RunRecord], c: f64) -> Result<GronwallCheck> {
    if !(c > 0.0) {
        return Err(KineticError::Argument(format!("C must be positive, got {c}")));
    }
    let first = records.first().ok_or_else(|| KineticError::Argument("empty run log".into()))?;
    let mut integral = 0.0;
    let mut margins = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            let p = &records[i - 1];
            if !(r.t > p.t) {
                return Err(KineticError::Argument(format!("log times are not increasing at record {i}")));
            }
            integral += 0.5 * (r.t - p.t) * (r.norm_dpg + p.norm_dpg);
        }
        margins.push(first.norm_m * (c * integral).exp() - r.norm_m);
    }
    // relative slack for the rounding in the logged norms
    let holds = margins
        .iter()
        .zip(records)
        .all(|(m, r)| *m >= -1e-12 * r.norm_m.max(first.norm_m));
    Ok(GronwallCheck { holds, margins })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiccatiCheck {
    /// y(t) <= y(s) / (1 - C y(s) (t - s)) for every logged s < t where the
    /// envelope is finite.
    pub pairwise_holds: bool,
    /// y(s) >= 1 / (C (T - s)) at every logged s, when T was given.
    pub blowup_rate_holds: Option<bool>,
    /// Earliest (s, t) where 1 - C y(s)(t - s) <= 0: the envelope blew up first.
    pub envelope_blowup: Option<(f64, f64)>,
    pub worst_pairwise_margin: f64,
    pub worst_rate_margin: Option<f64>,
}

/// Relative tolerance used for equality cases.
pub const RICCATI_TOL: f64 = 1e-12;

/// Integrated form of y' <= C y^2 along (t, y) samples.
pub fn riccati_check(times: &[f64], y: &[f64], c: f64, blowup_time: Option<f64>) -> Result<RiccatiCheck> {
    if times.len() != y.len() || times.is_empty() {
        return Err(KineticError::Argument("times and values must be non-empty and of equal length".into()));
    }
    if !(c > 0.0) {
        return Err(KineticError::Argument(format!("C must be positive, got {c}")));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(KineticError::Argument("times must be strictly increasing".into()));
    }
    let mut pairwise_holds = true;
    let mut envelope_blowup = None;
    let mut worst = f64::INFINITY;
    for s in 0..times.len() {
        for t in s + 1..times.len() {
            let den = 1.0 - c * y[s] * (times[t] - times[s]);
            if den <= 0.0 {
                if envelope_blowup.is_none() {
                    envelope_blowup = Some((times[s], times[t]));
                }
                break;
            }
            let bound = y[s] / den;
            let margin = (bound - y[t]) / bound.abs().max(f64::MIN_POSITIVE);
            worst = worst.min(margin);
            if margin < -RICCATI_TOL {
                pairwise_holds = false;
            }
        }
    }
    let (blowup_rate_holds, worst_rate_margin) = match blowup_time {
        None => (None, None),
        Some(big_t) => {
            if !(big_t > *times.last().expect("non-empty")) {
                return Err(KineticError::Argument("blowup time must exceed the last logged time".into()));
            }
            let mut ok = true;
            let mut worst_rate = f64::INFINITY;
            for (s, ys) in times.iter().zip(y) {
                let floor = 1.0 / (c * (big_t - s));
                let margin = (ys - floor) / floor;
                worst_rate = worst_rate.min(margin);
                if margin < -RICCATI_TOL {
                    ok = false;
                }
            }
            (Some(ok), Some(worst_rate))
        }
    };
    Ok(RiccatiCheck {
        pairwise_holds,
        blowup_rate_holds,
        envelope_blowup,
        worst_pairwise_margin: if worst.is_finite() { worst } else { 0.0 },
        worst_rate_margin,
    })
}

/// Norm samples of a run log in the form taken by [`riccati_check`]:
/// the unweighted sup norm is ||f||_{L^inf_{d+gamma}} when gamma = -d.
pub fn riccati_series(records: &[RunRecord]) -> (Vec<f64>, Vec<f64>) {
    (records.iter().map(|r| r.t).collect(), records.iter().map(|r| r.norm_dpg).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exact_riccati_solution_is_tight() {
        let c = 8.0 * PI;
        let big_t = 1.0;
        let times: Vec<f64> = (0..50).map(|i| 0.9 * i as f64 / 49.0).collect();
        let y: Vec<f64> = times.iter().map(|t| 1.0 / (c * (big_t - t))).collect();
        let out = riccati_check(&times, &y, c, Some(big_t)).unwrap();
        assert!(out.pairwise_holds);
        assert_eq!(out.blowup_rate_holds, Some(true));
        assert!(out.worst_pairwise_margin.abs() < 1e-12);
        assert!(out.worst_rate_margin.unwrap().abs() < 1e-12);
    }

    #[test]
    fn constant_trajectory_holds_strictly() {
        let times: Vec<f64> = (0..10).map(|i| i as f64 * 0.01).collect();
        let y = vec![2.0; 10];
        let out = riccati_check(&times, &y, 1.0, None).unwrap();
        assert!(out.pairwise_holds);
        assert!(out.worst_pairwise_margin > 0.0);
    }

    #[test]
    fn zero_log_satisfies_gronwall() {
        let r = RunRecord { t: 0.0, norm_m: 0.0, norm_dpg: 0.0, mass: 0.0, momentum: [0.0; 3], energy: 0.0, negmax: 0.0 };
        let r2 = RunRecord { t: 1.0, ..r };
        assert!(gronwall_check(&[r, r2], 3.0).unwrap().holds);
    }
}
