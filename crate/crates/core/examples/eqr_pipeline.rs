//! The quantization rule step by step: quantum correction from the ground
//! state, momentum integral between turning points, then the energy that
//! satisfies `∫k dr = Nπ + Q_c`.

use kratzer_eqr::eqr::{
    momentum_integral, momentum_integral_closed, quantum_correction_analytic, quantum_correction_numeric,
    solve_energy_eqr,
};
use kratzer_eqr::molecules::{builtin_registry, lookup, PotentialKind};
use kratzer_eqr::{energy_level, PhysicalConstants, QuadratureConfig, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let constants = PhysicalConstants::default();
    let quad = QuadratureConfig::default();
    let registry = builtin_registry();
    let co = lookup(&registry, "CO", PotentialKind::Kratzer, None).expect("CO is built in");
    let system = co.system(PotentialKind::Kratzer, &constants)?;

    let state = QuantumState::new(3, 2, 3)?;
    let m = state.m();
    let lambda = system.lambda(m)?;
    let qc_numeric = quantum_correction_numeric(&system, m, &quad)?;
    let qc_closed = quantum_correction_analytic(lambda)?;
    println!("Λ = {lambda:.9}");
    println!("Q_c numeric {qc_numeric:.15}  closed {qc_closed:.15}");

    let energy = solve_energy_eqr(&system, m, state.n, &quad)?;
    let closed = energy_level(&system, state)?.energy;
    let (ra, rb) = system.turning_points(m, energy)?;
    println!("turning points {ra:.6} Å .. {rb:.6} Å");
    println!(
        "∫k dr numeric {:.12}  closed {:.12}",
        momentum_integral(&system, m, energy, &quad)?,
        momentum_integral_closed(&system, m, energy)?
    );
    println!("E from the rule {energy:.12} eV, closed form {closed:.12} eV");
    Ok(())
}
