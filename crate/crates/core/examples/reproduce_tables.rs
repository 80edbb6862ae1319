//! Recomputes every bundled reference table with default and calibrated
//! constants.

use kratzer_eqr::tables::{reproduce_table, TableId};
use kratzer_eqr::PhysicalConstants;

fn main() -> kratzer_eqr::Result<()> {
    let base = PhysicalConstants::default();
    println!("{:<9} {:>7} {:>12} {:>12} {:>14}", "table", "entries", "default", "calibrated", "other method");
    for id in TableId::ALL {
        let plain = reproduce_table(id, &base, false)?;
        let tuned = reproduce_table(id, &base, true)?;
        let other = tuned
            .max_comparison_deviation
            .map_or_else(|| "-".to_string(), |d| format!("{d:.2e} eV"));
        println!(
            "{:<9} {:>7} {:>12.2e} {:>12.2e} {:>14}",
            id.to_string(),
            plain.rows.len(),
            plain.max_relative_deviation,
            tuned.max_relative_deviation,
            other
        );
        for r in tuned.malformed() {
            println!("  printed \"{}\" for {} ({},{}) read as {:.12}", r.printed, r.molecule, r.n, r.l, r.reference);
        }
    }
    Ok(())
}
