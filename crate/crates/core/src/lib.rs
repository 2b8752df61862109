//! Models for trapped ions at high motional frequency.
//!
//! The crate is `no_std` (with `alloc`) and contains only numerics: trap design
//! from rf drive parameters, Doppler cooling on the Fock ladder in both sideband
//! regimes, heating and dephasing noise models, a truncated Fock-space
//! open-system simulator for cat states, and an experimental runtime planner.
//! File formats, configuration and the command line live in the `ionfreq`
//! crate.
//!
//! Internally every frequency is angular (rad/s) and every quantity is SI.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bosonic;
pub mod constants;
pub mod cooling;
mod error;
pub mod grid;
pub mod noise;
pub mod ode;
pub mod runtime;
pub mod species;
pub mod trap;

pub use error::{Error, Result};
pub use species::{IonSpecies, SpeciesRecord, SpeciesRegistry};
