//! Zitterbewegung of particle-hole wavepackets in the periodic 1D Kitaev chain.
//!
//! The primary engine ([`evolver`]) propagates states exactly in the paired
//! momentum representation, one analytic 2×2 rotation per mode. The
//! [`oracle`] module builds the dense real-space Bogoliubov-de Gennes matrix
//! and evolves by full diagonalization, so the two paths can be checked
//! against each other.

pub mod cli;
pub mod error;
pub mod evolver;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod schedule;
pub mod state;

pub use error::{Error, Result};
pub use evolver::{evolve, evolve_scheduled, propagator, Engine, ModePropagator, SpectralEngine};
pub use model::{
    approx_zb_parameters, effective_field, gap, is_magic, xi, ChainParams, EffectiveField, TpSign,
    ZbPrediction,
};
pub use observables::{
    extract_zb, mean_positions, occupation_profile, profile_fidelity, TrajectoryRecord, ZbEstimate,
};
pub use oracle::{build_bdg_matrix, evolve_oracle, BdgMatrix, OracleEngine};
pub use schedule::{make_resonant_schedule, make_windowed_schedule, tp_sign_at, Schedule};
pub use state::{delta_packet, from_k_paired, gaussian_packet, to_k_paired, KPairedField, SpinorField};

pub use num_complex::Complex64;
