//! Numerical certificates for the barrier, contact-point and threshold
//! estimates.

pub mod contact;
pub mod crude;
pub mod hyperplane;
pub mod landau_threshold;
pub mod report;
pub mod stereo;

pub use contact::{contact_estimate_check, contact_sweep, ContactConfiguration, ContactEstimate, ContactSweep};
pub use crude::{crude_bound_check, crude_sweep, landau_crude_envelope, CrudeFamilyMember};
pub use hyperplane::{boltzmann_delta_search, boltzmann_hyperplane_integral, boltzmann_m0_search};
pub use landau_threshold::{landau_delta_search, landau_integrand, landau_integrand_sup};
pub use report::{CertificateEntry, ThresholdReport};
