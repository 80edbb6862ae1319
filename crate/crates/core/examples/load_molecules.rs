//! Reads molecules from a JSON file, given as the first argument or a
//! built-in sample.
//!
//! ```text
//! cargo run --example load_molecules -- my_molecules.json
//! ```

use kratzer_eqr::molecules::{parse_molecule_file, PotentialKind};
use kratzer_eqr::{PhysicalConstants, QuantumState};

const SAMPLE: &str = r#"{
  "constants": {"hbar_c": 1973.269804},
  "molecules": [
    {"name": "ScO", "De": 56000.0, "De_unit": "cm-1", "re": 1.668, "mu": 12.3},
    {"name": "H2",  "De": 4.7446,  "re": 0.7416, "mu": 0.50391}
  ]
}"#;

fn main() -> kratzer_eqr::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).map_err(|e| kratzer_eqr::Error::Io(format!("{path}: {e}")))?,
        None => SAMPLE.to_string(),
    };
    let base = PhysicalConstants::default();
    let file = parse_molecule_file(&text, &base)?;
    let constants = file.constants.apply(base)?;
    let ground = QuantumState::new(0, 0, 3)?;
    for m in &file.molecules {
        let kratzer = m.energy(PotentialKind::Kratzer, ground, &constants)?;
        let modified = m.energy(PotentialKind::Modified, ground, &constants)?;
        println!("{:<5} De = {:.6} eV  E0 = {kratzer:.9} eV (Kratzer), {modified:.9} eV (modified)", m.name, m.de);
    }

    match parse_molecule_file(r#"{"molecules": [{"name": "bad", "De": 1, "re": -2, "mu": 1}]}"#, &base) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("negative re is invalid"),
    }
    Ok(())
}
