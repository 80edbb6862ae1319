//! Seeded cross-check of closed forms, quadrature and the shooting oracle
//! over random potentials.

use kratzer_eqr::verify::{run_verification, VerifyConfig};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let report = run_verification(&VerifyConfig {
        seed,
        count: 20,
        ..VerifyConfig::default()
    });
    for c in &report.summary {
        println!(
            "{:<26} max {:.2e}  tol {:.0e}  over {:>4}  {}",
            c.name,
            c.max_residual,
            c.tolerance,
            c.checked,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    for f in &report.failures {
        println!("failure: {f}");
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
