use serde::Serialize;

use crate::error::{KineticError, Result};

/// Largest similarity exponent compatible with entropy decay and finite
/// mass and energy near the implosion.
pub const LAMBDA_ENVELOPE: f64 = 8.0 / 5.0;
/// Weaker bound obtained from compensated integrability.
pub const SERRE_LAMBDA_BOUND: f64 = 9.0 / 5.0;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(-3.0..=1.0).contains(&gamma) {
        return Err(KineticError::Argument(format!("gamma must lie in [-3, 1], got {gamma}")));
    }
    Ok(())
}

/// Whether int_0^T (|u|^{3+gamma} + theta^{(3+gamma)/2}) dt can diverge for
/// a self-similar implosion with exponent lambda: (3 + gamma)(1/lambda - 1) <= -1.
pub fn blowup_integrability_condition(lambda: f64, gamma: f64) -> Result<bool> {
    if !(lambda > 1.0) {
        return Err(KineticError::Domain(format!("lambda must exceed 1 for focusing, got {lambda}")));
    }
    check_gamma(gamma)?;
    Ok((3.0 + gamma) * (1.0 / lambda - 1.0) <= -1.0)
}

/// Smallest gamma at which the condition holds for a given lambda:
/// lambda / (lambda - 1) - 3, tending to -2 as lambda grows.
pub fn gamma_threshold(lambda: f64) -> Result<f64> {
    if !(lambda > 1.0) {
        return Err(KineticError::Domain(format!("lambda must exceed 1 for focusing, got {lambda}")));
    }
    if lambda.is_infinite() {
        return Ok(-2.0);
    }
    Ok(lambda / (lambda - 1.0) - 3.0)
}

/// Inverse of [`gamma_threshold`]: (3 + gamma) / (2 + gamma) for gamma > -2.
pub fn lambda_for_gamma_threshold(gamma: f64) -> Result<f64> {
    if !(gamma > -2.0) {
        return Err(KineticError::Domain(format!("no finite lambda reaches gamma = {gamma} <= -2")));
    }
    Ok((3.0 + gamma) / (2.0 + gamma))
}

/// Rounding allowance for the closed inequality kappa <= -3(lambda - 1).
pub const EXPONENT_TOL: f64 = 1e-12;

/// -3 < kappa <= -3(lambda - 1) and 1 < lambda < (5 + kappa) / 2.
pub fn admissible_exponent_check(kappa: f64, lambda: f64) -> bool {
    -3.0 < kappa
        && kappa <= -3.0 * (lambda - 1.0) + EXPONENT_TOL
        && 1.0 < lambda
        && lambda < (5.0 + kappa) / 2.0
}

/// Supremum of admissible lambda at fixed kappa, None when no lambda > 1 is
/// admissible.
pub fn max_admissible_lambda(kappa: f64) -> Option<f64> {
    if !(kappa > -3.0) {
        return None;
    }
    let sup = (1.0 - kappa / 3.0).min((5.0 + kappa) / 2.0);
    (sup > 1.0).then_some(sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaEnvelope {
    pub kappa: f64,
    pub lambda: f64,
}

/// Corner of the admissible region: kappa = -3(lambda - 1) meets
/// lambda = (5 + kappa) / 2, giving kappa = -9/5 and lambda = 8/5.
pub fn lambda_envelope() -> LambdaEnvelope {
    // 1 - kappa/3 = (5 + kappa)/2  =>  kappa (1/2 + 1/3) = 1 - 5/2
    let kappa = (1.0 - 2.5) / (0.5 + 1.0 / 3.0);
    LambdaEnvelope { kappa, lambda: (5.0 + kappa) / 2.0 }
}
