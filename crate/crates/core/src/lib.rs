//! Driven-dissipative few-level quantum systems.
//!
//! `qdrive-core` builds the Lindblad generator of a resonantly driven
//! few-level system coupled to thermal baths, integrates the density matrix
//! in time, and reports the energy flows between drive, system and baths:
//! absorbed power, per-transition heat currents, the detailed-balance
//! violation of each transition, and accumulated work and heat. Steady
//! states are obtained directly from the null space of the generator.
//!
//! Units throughout: ħ = k_B = 1, rates in units of a reference decay rate
//! κ, energies in units of a reference gap, time in 1/κ.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
pub mod energetics;
mod error;
pub mod linalg;
pub mod liouvillian;
pub mod model;
pub mod steady;

pub use dynamics::{
    evolve, initial_state, propagate_exact, InitialState, RunProtocol, Sample, Termination, Trajectory,
};
pub use energetics::EnergeticsSample;
pub use error::Error;
pub use linalg::{CMatrix, C64};
pub use liouvillian::{DensityMatrix, Liouvillian};
pub use model::{DiamondMode, DriveSpec, LevelSpec, SystemSpec, TransitionSpec};
pub use steady::{gibbs_state, steady_states, SteadyResult};

/// Result alias used across the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
