//! Solves the radial equation by Numerov shooting, with no closed form
//! involved, and compares with the analytic levels.

use kratzer_eqr::molecules::{builtin_registry, lookup, PotentialKind};
use kratzer_eqr::numerov::{shoot_level, solve_numerov_default, RadialGrid};
use kratzer_eqr::{energy_level, PhysicalConstants, QuantumState};

fn main() -> kratzer_eqr::Result<()> {
    let constants = PhysicalConstants::default();
    let registry = builtin_registry();
    let n2 = lookup(&registry, "N2", PotentialKind::Modified, None).expect("N2 is built in");
    let system = n2.system(PotentialKind::Modified, &constants)?;

    for (n, l) in [(0, 0), (1, 0), (2, 3), (4, 5)] {
        let state = QuantumState::new(n, l, 3)?;
        let exact = energy_level(&system, state)?.energy;
        let sol = solve_numerov_default(&system, state.m(), n)?;
        println!(
            "{state}: shooting {:.12}  analytic {exact:.12}  rel {:.1e}  (Richardson estimate {:.1e}, {} points)",
            sol.energy,
            ((sol.energy - exact) / exact).abs(),
            sol.richardson_error(),
            sol.grid.point_count
        );
    }

    // fourth-order convergence on a fixed box
    let state = QuantumState::new(0, 0, 3)?;
    let exact = energy_level(&system, state)?.energy;
    let box_ = RadialGrid::for_state(&system, state.m(), 0)?;
    let mut last = None;
    for points in [4001, 8001, 16001] {
        let grid = RadialGrid::new(box_.r_min, box_.r_max, points)?;
        let err = (shoot_level(&system, state.m(), 0, &grid)? - exact).abs();
        match last {
            Some(prev) => println!("{points:>6} points: error {err:.3e}  ratio {:.2}", prev / err),
            None => println!("{points:>6} points: error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}
