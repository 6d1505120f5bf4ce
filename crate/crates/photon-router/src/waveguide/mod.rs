//! Real-space propagation of the fiber-cavity-atom system in the
//! two-excitation sector, for arbitrary pulse shapes, intrinsic losses and
//! the strong-coupling sideband regime.

pub mod engine;
pub mod grid;
mod linalg;
pub mod runs;
pub mod single;

pub use engine::{JunctionRates, WaveguideState};
pub use grid::{sample_pulse, WaveguideGrid};
pub use runs::{
    dump_snapshot, load_snapshot, plan_grid, rabi_sideband, run, run_default,
    strong_coupling_effective_gamma_c, strong_coupling_run, RunReport, DEFAULT_POINTS,
};
pub use single::{ring_down, ring_down_rate, single_photon_run, SinglePhotonState};
