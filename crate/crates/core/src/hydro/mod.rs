//! Hydrodynamic side of the lifting argument: Euler states and their local
//! Maxwellians, entropy admissibility, similarity-exponent arithmetic and
//! verdicts for known implosion scenarios.

pub mod euler;
pub mod exponents;
pub mod scenario;

pub use euler::{
    entropy_bound, maxwellian_field, maxwellian_moments, maxwellian_weighted_norm, EntropyBound, EulerState,
    MaxwellianNorm, MomentOutcome,
};
pub use exponents::{
    admissible_exponent_check, blowup_integrability_condition, gamma_threshold, lambda_envelope,
    lambda_for_gamma_threshold, max_admissible_lambda, LambdaEnvelope, LAMBDA_ENVELOPE, SERRE_LAMBDA_BOUND,
};
pub use scenario::{
    builtin_catalog, load_catalog, read_catalog, scenario_verdict, write_verdict_csv, ImplosionScenario, Kappa,
    ScenarioVerdict, Symmetry, Verdict,
};
