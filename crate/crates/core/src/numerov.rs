//! Shooting solver for the reduced radial equation `R'' = (2μ/ℏ²)(V_eff − E) R`.
//!
//! Used as an independent referee for the closed-form spectrum. It only reads
//! the potential itself (the effective potential, its centrifugal strength and
//! turning points) and never any energy formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::RadialSystem;

/// Smallest grid the solver accepts.
pub const MIN_POINTS: usize = 1000;
/// Points on the default grid; one more than a power-of-two multiple so the
/// grid halves exactly.
pub const DEFAULT_POINTS: usize = 20_001;
/// Largest phase advance `h·k` per step on the default grid.
pub const MAX_PHASE_STEP: f64 = 0.05;
/// Steps of the initial energy scan.
pub const SCAN_STEPS: usize = 400;
/// Absolute energy resolution of the final bisection (eV), tightened to
/// `1e-13·|E|` for shallow levels.
pub const ENERGY_TOLERANCE: f64 = 1e-10;
/// Largest acceptable `|E_h − E_2h| / 15` relative to `|E_h|`.
pub const RICHARDSON_TOLERANCE: f64 = 1e-8;

/// Integration starts where `h²|f|/12` has dropped to this value.
const START_STIFFNESS: f64 = 0.1;
const RESCALE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    /// Å
    pub r_min: f64,
    /// Å
    pub r_max: f64,
    pub point_count: usize,
    /// Å
    pub spacing: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, point_count: usize) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Domain {
                name: "grid",
                value: r_max - r_min,
                reason: "need 0 < r_min < r_max",
            });
        }
        if point_count < MIN_POINTS {
            return Err(Error::Domain {
                name: "point_count",
                value: point_count as f64,
                reason: "grid needs at least 1000 points",
            });
        }
        Ok(Self {
            r_min,
            r_max,
            point_count,
            spacing: (r_max - r_min) / (point_count - 1) as f64,
        })
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing
    }

    /// Same span with twice the spacing.
    pub fn coarsened(&self) -> Result<Self> {
        Self::new(self.r_min, self.r_max, (self.point_count - 1) / 2 + 1)
    }

    /// Same span with half the spacing.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.r_min, self.r_max, 2 * (self.point_count - 1) + 1)
    }

    /// Grid from `10⁻³·r_scale` to twelve times the outer turning point of a
    /// coarse estimate of the level, with [`DEFAULT_POINTS`] points or more
    /// when the local wavelength demands it.
    pub fn for_state(system: &RadialSystem, m: u32, n: u32) -> Result<Self> {
        let scale = length_scale(system, m)?;
        let r_min = 1e-3 * scale;
        let mut r_max = 20.0 * scale;
        for _ in 0..12 {
            let coarse = Self::new(r_min, r_max, DEFAULT_POINTS)?;
            let estimate = Shooter::new(system, m, &coarse)?.level_by_nodes(n, 1e-6)?;
            let (_, rb) = system.turning_points(m, estimate)?;
            if 3.0 * rb <= r_max {
                let r_max = 12.0 * rb;
                // keep h·k ≤ MAX_PHASE_STEP at the bottom of the well
                let floor = system.effective_minimum(m)?.map_or(estimate, |(_, v)| v);
                let k_max = (system.two_mu_over_hbar2() * (estimate - floor)).max(0.0).sqrt();
                let needed = ((r_max - r_min) * k_max / MAX_PHASE_STEP).ceil() as usize;
                let points = DEFAULT_POINTS.max(2 * needed.div_ceil(2) + 1);
                return Self::new(r_min, r_max, points);
            }
            r_max *= 2.0;
        }
        Err(Error::StateNotFound {
            nodes: n,
            reason: "outer turning point keeps growing with the box".into(),
        })
    }
}

/// Position of the well minimum, or the Coulomb length `2ℏ²/(2μB)` when the
/// centrifugal term vanishes.
fn length_scale(system: &RadialSystem, m: u32) -> Result<f64> {
    match system.effective_minimum(m)? {
        Some((r, _)) => Ok(r),
        None => Ok(2.0 / (system.two_mu_over_hbar2() * system.spec.b)),
    }
}

/// Counts strict sign changes, skipping samples below `1e-12·max|sample|`.
pub fn node_count(samples: &[f64]) -> u32 {
    let peak = samples.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 1e-12 * peak;
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in samples {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumerovSolution {
    /// eV, on the requested grid
    pub energy: f64,
    /// eV, on the grid with twice the spacing
    pub coarse_energy: f64,
    pub nodes: u32,
    pub grid: RadialGrid,
}

impl NumerovSolution {
    /// `|E_h − E_2h| / 15`, the leading-order error of `E_h`.
    pub fn richardson_error(&self) -> f64 {
        (self.energy - self.coarse_energy).abs() / 15.0
    }
}

/// Energy of the `n`-node state of the effective potential for `M = m`.
pub fn solve_numerov(system: &RadialSystem, m: u32, n: u32, grid: &RadialGrid) -> Result<f64> {
    Ok(solve_numerov_detailed(system, m, n, grid)?.energy)
}

/// Level on `grid` alone, without the coarser-grid consistency check.
pub fn shoot_level(system: &RadialSystem, m: u32, n: u32, grid: &RadialGrid) -> Result<f64> {
    Shooter::new(system, m, grid)?.level(n)
}

/// [`solve_numerov`] on the grid of [`RadialGrid::for_state`].
pub fn solve_numerov_default(system: &RadialSystem, m: u32, n: u32) -> Result<NumerovSolution> {
    let grid = RadialGrid::for_state(system, m, n)?;
    solve_numerov_detailed(system, m, n, &grid)
}

/// Solves on `grid` and on the grid with twice the spacing, failing when the
/// two disagree by more than the fourth-order error budget allows.
pub fn solve_numerov_detailed(
    system: &RadialSystem,
    m: u32,
    n: u32,
    grid: &RadialGrid,
) -> Result<NumerovSolution> {
    let energy = Shooter::new(system, m, grid)?.level(n)?;
    let coarse_grid = grid.coarsened()?;
    let coarse_energy = Shooter::new(system, m, &coarse_grid)?.level(n)?;
    let solution = NumerovSolution {
        energy,
        coarse_energy,
        nodes: n,
        grid: *grid,
    };
    let error = solution.richardson_error();
    if error > RICHARDSON_TOLERANCE * energy.abs().max(ENERGY_TOLERANCE) {
        return Err(Error::NumericalFailure(format!(
            "grid too coarse: E = {energy:e} on h = {:e}, {coarse_energy:e} on 2h",
            grid.spacing
        )));
    }
    Ok(solution)
}

fn resolution(lo: f64, hi: f64) -> f64 {
    ENERGY_TOLERANCE.min(1e-13 * lo.abs().min(hi.abs()))
}

/// Outward and inward Numerov sweeps on a fixed grid.
struct Shooter {
    grid: RadialGrid,
    /// `(2μ/ℏ²)·V_eff(r_i)`
    scaled_potential: Vec<f64>,
    two_mu: f64,
    /// Exponent of the regular solution near the origin.
    power: f64,
    /// `−(2μ/ℏ²)B / (2p)`
    frobenius: f64,
    floor: f64,
    ceiling: f64,
}

impl Shooter {
    fn new(system: &RadialSystem, m: u32, grid: &RadialGrid) -> Result<Self> {
        let two_mu = system.two_mu_over_hbar2();
        let scaled_potential = (0..grid.point_count)
            .map(|i| Ok(two_mu * system.effective_potential(m, grid.radius(i))?))
            .collect::<Result<Vec<_>>>()?;
        let floor = scaled_potential.iter().copied().fold(f64::INFINITY, f64::min) / two_mu;
        let c = system.spec.c;
        let ceiling = c - 1e-12 * c.abs().max(system.spec.b / grid.r_max);
        if !(floor < ceiling) {
            return Err(Error::StateNotFound {
                nodes: 0,
                reason: "effective potential has no well on this grid".into(),
            });
        }
        let power = system.lambda(m)? + 1.0;
        Ok(Self {
            grid: *grid,
            scaled_potential,
            two_mu,
            power,
            frobenius: -two_mu * system.spec.b / (2.0 * power),
            floor,
            ceiling,
        })
    }

    fn weight(&self, i: usize, energy: f64) -> f64 {
        let h = self.grid.spacing;
        h * h / 12.0 * (self.scaled_potential[i] - self.two_mu * energy)
    }

    /// First index from which the recurrence is stable.
    fn start_index(&self, energy: f64) -> usize {
        (1..self.grid.point_count)
            .find(|&i| self.weight(i, energy).abs() <= START_STIFFNESS)
            .unwrap_or(self.grid.point_count)
    }

    fn step(&self, i_next: usize, i: usize, i_prev: usize, r: f64, r_prev: f64, energy: f64) -> f64 {
        let (w_next, w, w_prev) = (
            self.weight(i_next, energy),
            self.weight(i, energy),
            self.weight(i_prev, energy),
        );
        (2.0 * r * (1.0 + 5.0 * w) - r_prev * (1.0 - w_prev)) / (1.0 - w_next)
    }

    /// Outward sweep up to index `stop`, calling `visit` on every value.
    fn outward(&self, energy: f64, stop: usize, mut visit: impl FnMut(usize, f64)) -> Result<()> {
        let s = self.start_index(energy);
        if s + 2 > stop {
            return Err(Error::NumericalFailure(
                "grid too coarse near the origin for the centrifugal barrier".into(),
            ));
        }
        let (r0, r1) = (self.grid.radius(s - 1), self.grid.radius(s));
        // r^p e^{c₁r}, exact through the first Frobenius correction and positive
        let mut prev = (-self.power * (r1 / r0).ln() - self.frobenius * (r1 - r0)).exp();
        let mut cur = 1.0;
        visit(s - 1, prev);
        visit(s, cur);
        for i in s..stop {
            let next = self.step(i + 1, i, i - 1, cur, prev, energy);
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
            }
            visit(i + 1, cur);
        }
        Ok(())
    }

    /// Inward sweep from the last point down to index `stop`.
    fn inward(&self, energy: f64, stop: usize, mut visit: impl FnMut(usize, f64)) {
        let last = self.grid.point_count - 1;
        let mut prev = 0.0;
        let mut cur = 1.0;
        visit(last - 1, cur);
        for i in (stop + 1..last).rev() {
            let next = self.step(i - 1, i, i + 1, cur, prev, energy);
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
            }
            visit(i - 1, cur);
        }
    }

    /// Sign changes of the outward solution over the whole grid: the number
    /// of levels below `energy`.
    fn levels_below(&self, energy: f64) -> Result<u32> {
        let mut last = 0.0f64;
        let mut count = 0;
        self.outward(energy, self.grid.point_count - 1, |_, v| {
            if v != 0.0 {
                if last != 0.0 && v.signum() != last.signum() {
                    count += 1;
                }
                last = v;
            }
        })?;
        Ok(count)
    }

    /// Bracket `[lo, hi]` with at most `n` levels below `lo` and more than `n` below `hi`.
    fn bracket(&self, n: u32) -> Result<(f64, f64)> {
        if self.levels_below(self.ceiling)? <= n {
            return Err(Error::StateNotFound {
                nodes: n,
                reason: "fewer bound levels than requested below the asymptote".into(),
            });
        }
        let step = (self.ceiling - self.floor) / SCAN_STEPS as f64;
        let mut lo = self.floor;
        for k in 1..=SCAN_STEPS {
            let e = if k == SCAN_STEPS { self.ceiling } else { self.floor + k as f64 * step };
            if self.levels_below(e)? > n {
                return Ok((lo, e));
            }
            lo = e;
        }
        Err(Error::StateNotFound {
            nodes: n,
            reason: "node count never exceeded the requested value".into(),
        })
    }

    /// Node-count bisection down to a relative bracket width `tolerance`.
    fn level_by_nodes(&self, n: u32, tolerance: f64) -> Result<f64> {
        let (mut lo, mut hi) = self.bracket(n)?;
        while hi - lo > tolerance * hi.abs().max(lo.abs()) && hi - lo > resolution(lo, hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.levels_below(mid)? > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Last grid index inside the classically allowed region.
    fn outer_turning_index(&self, energy: f64) -> usize {
        let threshold = self.two_mu * energy;
        let last = self.grid.point_count - 1;
        let i = (0..=last)
            .rev()
            .find(|&i| self.scaled_potential[i] <= threshold)
            .unwrap_or(0);
        i.clamp(2, last - 2)
    }

    /// Log-derivative mismatch of the outward and inward solutions at index `j`.
    fn mismatch(&self, energy: f64, j: usize) -> Result<f64> {
        let mut out = [0.0; 3];
        self.outward(energy, j + 1, |i, v| {
            if i + 1 >= j && i <= j + 1 {
                out[i + 1 - j] = v;
            }
        })?;
        let mut inn = [0.0; 3];
        self.inward(energy, j - 1, |i, v| {
            if i + 1 >= j && i <= j + 1 {
                inn[i + 1 - j] = v;
            }
        });
        Ok((out[2] - out[0]) / out[1] - (inn[2] - inn[0]) / inn[1])
    }

    fn level(&self, n: u32) -> Result<f64> {
        let (mut lo, mut hi) = self.bracket(n)?;
        // narrow by node count until the matching condition is single-valued
        for _ in 0..200 {
            if hi - lo <= 1e-7 * hi.abs().max(lo.abs()) || hi - lo <= resolution(lo, hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.levels_below(mid)? > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let j = self.outer_turning_index(0.5 * (lo + hi));
        if self.grid.radius(j) > 0.5 * self.grid.r_max {
            return Err(Error::NumericalFailure(
                "grid does not extend far enough past the outer turning point".into(),
            ));
        }
        let g_lo = self.mismatch(lo, j)?;
        let g_hi = self.mismatch(hi, j)?;
        let matched = g_lo.is_finite() && g_hi.is_finite() && g_lo.signum() != g_hi.signum();
        for _ in 0..200 {
            if hi - lo <= resolution(lo, hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let upper = if matched {
                self.mismatch(mid, j)?.signum() == g_hi.signum()
            } else {
                self.levels_below(mid)? > n
            };
            if upper {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
