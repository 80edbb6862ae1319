//! Closed-form bound-state energies and the interdimensional degeneracy map.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::potential::{PotentialSpec, QuantumState, RadialSystem};
use crate::units::PhysicalConstants;

/// Largest dimension the tables and degeneracy maps are meant to cover.
pub const MAX_DIMENSION: u32 = 12;
/// Largest `n` or `l` the closed form is exercised on.
pub const MAX_QUANTUM_NUMBER: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub state: QuantumState,
    /// eV
    pub energy: f64,
    pub lambda: f64,
    /// `ñ = n + 1 + Λ`
    pub n_tilde: f64,
}

/// `E = C − (μ/2ℏ²)(B/ñ)²` with `ñ = n + 1 + Λ(M)`.
pub fn energy_level(system: &RadialSystem, state: QuantumState) -> Result<EnergyLevel> {
    let lambda = system.lambda(state.m())?;
    let n_tilde = state.n as f64 + 1.0 + lambda;
    let ratio = system.spec.b / n_tilde;
    let energy = system.spec.c - 0.25 * system.two_mu_over_hbar2() * ratio * ratio;
    Ok(EnergyLevel {
        state,
        energy,
        lambda,
        n_tilde,
    })
}

pub fn kratzer_energy(
    de: f64,
    re: f64,
    mass: f64,
    state: QuantumState,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let system = RadialSystem::new(PotentialSpec::from_kratzer(de, re)?, mass, *constants)?;
    Ok(energy_level(&system, state)?.energy)
}

pub fn modified_kratzer_energy(
    de: f64,
    re: f64,
    mass: f64,
    state: QuantumState,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let system = RadialSystem::new(
        PotentialSpec::from_modified_kratzer(de, re)?,
        mass,
        *constants,
    )?;
    Ok(energy_level(&system, state)?.energy)
}

/// All states `(n, l', D')` with `D' + 2l' = D + 2l` and `D'` in `dims`,
/// ordered by increasing dimension. The input state is included.
pub fn degenerate_partners(
    state: QuantumState,
    dims: std::ops::RangeInclusive<u32>,
) -> Vec<QuantumState> {
    let m = state.m();
    let lo = (*dims.start()).max(2);
    let hi = (*dims.end()).min(m);
    (lo..=hi)
        .filter(|d| (m - d) % 2 == 0)
        .map(|d| QuantumState {
            n: state.n,
            l: (m - d) / 2,
            d,
        })
        .collect()
}
