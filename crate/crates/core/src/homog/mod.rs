//! Space-homogeneous Landau solver on a periodic velocity grid and the
//! Gronwall / Riccati checks applied to its logs.

pub mod checks;
pub mod grid;
pub mod solver;
pub mod spectral;
pub mod stencil;

pub use checks::{gronwall_check, riccati_check, GronwallCheck, RiccatiCheck};
pub use grid::GridField;
pub use solver::{homog_run, homog_run_with_state, HomogSettings, RunLog, RunRecord, RunStatus};
