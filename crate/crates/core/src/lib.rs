//! Photon-gas heat engine driven by atoms carrying quantum coherence.
//!
//! Thermal atoms with coherence between degenerate ground (or excited)
//! levels pass through a single-mode cavity. The cavity settles at a steady
//! photon number set by the coherence, which defines an effective
//! temperature and, through a Carnot cycle, an efficiency bound that can
//! exceed the classical one.
//!
//! Quantities are in reduced units: temperatures are `k_B T / (hbar omega)`
//! and time is measured in units of the inverse atom-cavity exchange rate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod atoms;
pub mod dynamics;
pub mod engine;
pub mod error;
pub mod integrate;
pub mod linalg;
pub mod steady_state;
pub mod sweep;
pub mod units;

pub use atoms::{AtomConfiguration, FourLevelAtom, MultiGroundAtom, TwoExcitedAtom};
pub use error::{Constraint, Error, Result};
pub use steady_state::{PhotonCount, RegimeLabel, SteadyStateResult};
pub use units::{EffectiveTemperature, MeanPhotonNumber, ReducedTemperature};
