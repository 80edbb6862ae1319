//! Levels depend on `n` and `D + 2l` only, so `(n, l, D)` and
//! `(n, l − 1, D + 2)` coincide bit for bit.

use kratzer_eqr::molecules::{builtin_registry, lookup, PotentialKind};
use kratzer_eqr::spectrum::degenerate_partners;
use kratzer_eqr::{energy_level, PhysicalConstants, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let constants = PhysicalConstants::default();
    let registry = builtin_registry();
    let i2 = lookup(&registry, "I2", PotentialKind::Kratzer, None).expect("I2 is built in");
    let system = i2.system(PotentialKind::Kratzer, &constants)?;

    let start = QuantumState::new(0, 4, 2)?;
    let reference = energy_level(&system, start)?.energy;
    for state in degenerate_partners(start, 2..=10) {
        let e = energy_level(&system, state)?.energy;
        println!(
            "n={} l={} D={:>2} M={:>2}  E = {e:.12} eV  identical: {}",
            state.n,
            state.l,
            state.d,
            state.m(),
            e.to_bits() == reference.to_bits()
        );
    }
    Ok(())
}
