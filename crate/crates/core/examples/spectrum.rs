//! Rovibrational levels of HCl in three dimensions.
//!
//! ```text
//! cargo run --example spectrum
//! ```

use kratzer_eqr::molecules::{builtin_registry, lookup, PotentialKind};
use kratzer_eqr::{energy_level, PhysicalConstants, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let constants = PhysicalConstants::default();
    let registry = builtin_registry();
    let hcl = lookup(&registry, "HCl", PotentialKind::Kratzer, None).expect("HCl is built in");
    let system = hcl.system(PotentialKind::Kratzer, &constants)?;

    println!("HCl, De = {} eV, re = {} Å, μ = {} amu", hcl.de, hcl.re, hcl.mu);
    print!("{:>3}", "n\\l");
    for l in 0..=4 {
        print!("{l:>18}");
    }
    println!();
    for n in 0..=4 {
        print!("{n:>3}");
        for l in 0..=4 {
            let level = energy_level(&system, QuantumState::new(n, l, 3)?)?;
            print!("{:>18.12}", level.energy);
        }
        println!();
    }

    // vibrational spacing shrinks as the well fills
    let e = |n| energy_level(&system, QuantumState::new(n, 0, 3).unwrap()).map(|l| l.energy);
    for n in 0..4 {
        println!("E({}) - E({n}) = {:.6} eV", n + 1, e(n + 1)? - e(n)?);
    }
    Ok(())
}
