//! Truncated-Wigner simulation of atomic four-wave mixing and of the
//! interferometer that turns the resulting four-mode number correlations
//! into sub-shot-noise phase sensitivity.
//!
//! The crate is organised by model:
//!
//! * [`wigner`] holds what every model shares: seeded per-trajectory noise
//!   streams, the ensemble runner and the symmetric-ordering corrected
//!   estimators.
//! * [`fourmode`] is the undepleted-pump closed form and the four-mode
//!   Wigner equations.
//! * [`multimode`] is the one-dimensional field model (ground state, split-step
//!   evolution, free flight and region populations).
//! * [`interferometer`] is the three-pulse sequence, phase balancing and the
//!   sensitivity sweep.
//! * [`oat`] is the one-axis-twisting comparison scheme together with its
//!   exact number-basis reference.
//! * [`registry`] puts the interchangeable models behind common traits so a
//!   configuration file can pick them by name.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checkpoint;
pub mod config;
pub mod constants;
pub mod csvout;
pub mod error;
pub mod fourmode;
pub mod interferometer;
pub mod multimode;
pub mod oat;
pub mod optimize;
pub mod registry;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
pub use num_complex::Complex64;
