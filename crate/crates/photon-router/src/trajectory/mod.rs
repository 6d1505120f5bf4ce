//! Scenario-independent few-excitation engine: basis enumeration,
//! non-Hermitian evolution, collapse operators, and two-time correlation
//! assembly. Serves as the independent oracle for the closed forms.

pub mod chain;
pub mod correlations;
pub mod evolve;

pub use chain::{build_chain, ChainSystem, ChannelOp, Subsystem};
pub use correlations::{
    bunching_factors, correlation_surfaces, joint_detection_density, probabilities,
    probabilities_with_points, single_photon_probabilities,
};
pub use evolve::{default_dt, evolve, FewExcitationState};
