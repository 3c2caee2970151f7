//! Steady-state photon statistics of one- and two-atom driven cavity QED.
//!
//! Frequencies are in units of the cavity decay rate κ throughout the sweep
//! layer; the lower-level modules accept any consistent unit.

pub mod analytics;
pub mod config;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod observables;
pub mod output;
pub mod preset;
pub mod steady;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
