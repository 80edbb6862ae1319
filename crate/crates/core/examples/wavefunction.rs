//! Normalized hyperradial wavefunctions of LiH, their nodes and overlaps.

use kratzer_eqr::molecules::{builtin_registry, lookup, PotentialKind};
use kratzer_eqr::wavefunction::{eval_hyperradial, normalization_integral, overlap_integral, wavefunction_params};
use kratzer_eqr::{PhysicalConstants, QuadratureConfig, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let constants = PhysicalConstants::default();
    let quad = QuadratureConfig::default();
    let registry = builtin_registry();
    let lih = lookup(&registry, "LiH", PotentialKind::Kratzer, None).expect("LiH is built in");
    let system = lih.system(PotentialKind::Kratzer, &constants)?;

    let states: Vec<_> = (0..4)
        .map(|n| wavefunction_params(&system, QuantumState::new(n, 1, 3)?))
        .collect::<kratzer_eqr::Result<_>>()?;
    for p in &states {
        println!(
            "{}: κ = {:.6} Å⁻¹, ν = {:.4}, norm - 1 = {:+.2e}",
            p.state,
            p.kappa,
            p.nu,
            normalization_integral(p, &quad)? - 1.0
        );
    }
    println!("<0|3> = {:+.2e}", overlap_integral(&states[0], &states[3], &quad)?);

    // coarse profile of the n = 2 state around the equilibrium distance
    let p = &states[2];
    for i in 0..=16 {
        let r = 1.0 + 0.075 * i as f64;
        let psi = eval_hyperradial(p, r)?;
        let bar = "#".repeat((psi.abs() * 6.0).round() as usize);
        println!("r = {r:.3} Å  ψ = {psi:+.5}  {}{bar}", if psi < 0.0 { "-" } else { "+" });
    }
    Ok(())
}
