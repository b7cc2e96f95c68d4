//! Invariant measures and convergence-rate experiments.

pub mod cylinder;
pub mod invariance;
pub mod rate;
pub mod sampling;

pub use cylinder::{Ball, Component, CylinderSet};
pub use invariance::{invariance_exact, invariance_mc, Chi2Report, InvariantMap, InvarianceReport, Measure};
pub use sampling::{rng_for, sample_haar, sample_level, sample_mu_a, HaarDomain};
pub use rate::{
    degree_stats, rate_experiment, rate_of, rate_target, DegreeCheckpoint, DegreeReport, ExperimentConfig, MapKind,
    RateReport, SampleRecord,
};
