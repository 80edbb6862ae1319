//! Fits the mass-energy and wavenumber constants to the anchor entries and
//! shows what that does to a far-away level.

use kratzer_eqr::molecules::{builtin_registry_with, lookup, PotentialKind};
use kratzer_eqr::tables::calibrate;
use kratzer_eqr::{PhysicalConstants, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let base = PhysicalConstants::default();
    let cal = calibrate(&base)?;
    for a in &cal.anchors {
        println!("{} {} in {}: {} = {}", a.molecule, a.state, a.table, a.constant, a.value);
    }
    println!("amu·c² {:.6} -> {:.6} eV", base.amu_c2, cal.constants.amu_c2);

    let state = QuantumState::new(5, 5, 3)?;
    for (label, c) in [("default", base), ("calibrated", cal.constants)] {
        let registry = builtin_registry_with(&c);
        let lih = lookup(&registry, "LiH", PotentialKind::Kratzer, None).expect("LiH is built in");
        println!("{label:>10}: LiH {state} = {:.12} eV", lih.energy(PotentialKind::Kratzer, state, &c)?);
    }
    println!("{:>10}: LiH {state} = -2.035923524667 eV", "printed");
    Ok(())
}
