//! Bound states of the D-dimensional Kratzer and modified Kratzer potentials
//! from the exact quantization rule.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod eqr;
pub mod molecules;
pub mod numerov;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod render;
pub mod special;
pub mod spectrum;
pub mod tables;
pub mod units;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use potential::{PotentialSpec, QuantumState, RadialSystem};
pub use quadrature::{QuadratureConfig, QuadratureKind};
pub use spectrum::{energy_level, EnergyLevel};
pub use units::PhysicalConstants;
