//! Verification harness: region machinery, lemma checks and sweeps.

pub mod checks;
pub mod config;
pub mod regions;
pub mod sweep;

pub use checks::{run_all, run_inequality, InequalityReport, CHECK_NAMES};
pub use config::SweepConfig;
pub use regions::{a_gamma, classify_region, mu_z, RegionLabel};
pub use sweep::{sweep_theorem2, SweepReport};
