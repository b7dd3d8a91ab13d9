//! Numerical kinetic theory toolkit: Landau and Boltzmann collision
//! operators with singularity-aware quadrature, barrier and threshold
//! certificates, a space-homogeneous Landau solver, and hydrodynamic
//! implosion compatibility verdicts.

pub mod barrier;
pub mod boltzmann;
pub mod error;
pub mod field;
pub mod homog;
pub mod hydro;
pub mod kernel;
pub mod landau;
pub mod norm;
pub mod quadrature;
pub mod rng;
pub mod scheme;
pub mod verify;

pub use barrier::{make_barrier, pure_power_barrier, Barrier, BarrierField, BarrierOrder, BarrierOutput};
pub use boltzmann::{
    kernel_integrability_check, post_collision_map, q_boltzmann_carleman, q_boltzmann_sigma,
    CollisionGeometry,
};
pub use error::{KineticError, Result};
pub use field::{bracket, Maxwellian, VelocityField};
pub use homog::{gronwall_check, homog_run, riccati_check, GridField, HomogSettings, RunLog, RunRecord, RunStatus};
pub use hydro::{
    admissible_exponent_check, blowup_integrability_condition, entropy_bound, maxwellian_field, maxwellian_moments,
    maxwellian_weighted_norm, scenario_verdict, EulerState, ImplosionScenario, Verdict,
};
pub use kernel::{AngularKernel, KernelSpec, OperatorKind};
pub use landau::{landau_coefficients, q_landau, LandauCoefficients};
pub use norm::{weighted_sup_norm, WeightedNorm};
pub use scheme::QuadratureScheme;
pub use verify::{
    boltzmann_delta_search, boltzmann_hyperplane_integral, boltzmann_m0_search, contact_estimate_check,
    crude_bound_check, landau_delta_search, landau_integrand_sup, ContactConfiguration, ThresholdReport,
};
