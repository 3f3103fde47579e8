//! Degrees-of-freedom toolkit for the two-user MISO broadcast channel with
//! evolving, asymmetric and delayed CSIT.
//!
//! - [`quality`]: per-slot CSIT exponent profiles.
//! - [`region`] and [`corollary`]: DoF region polygons and closed-form solvers.
//! - [`scheme`]: multi-phase precoding schemes with ledgers and DoF accounting.
//! - [`sim`]: Monte Carlo measurement of power and rate exponents.
//! - [`lattice`]: rotated-QAM lattice codes for the block common symbols.

pub mod corollary;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod quality;
pub mod region;
pub mod scheme;
pub mod sim;

pub use error::{Error, Result};
