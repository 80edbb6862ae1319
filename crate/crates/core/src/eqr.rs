//! Numerical exact-quantization-rule pipeline.
//!
//! The quantization condition `∫ k dr = (n+1)π + Q_c` is evaluated with both
//! sides computed by quadrature between the classical turning points, and
//! solved for the energy by bisection. The closed forms of the same integrals
//! live next to the numerical routes so the two can be compared.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::RadialSystem;
use crate::quadrature::{Chord, ChordPoint, QuadratureConfig};

/// Bisection iteration cap for the energy search.
pub const MAX_BISECTION_STEPS: usize = 200;
/// Relative width at which the energy bracket is considered resolved.
pub const ENERGY_RELATIVE_TOLERANCE: f64 = 1e-13;

/// Ground-state logarithmic derivative `φ₀(r) = α₁/r + α₂` and its energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateLogDeriv {
    pub alpha1: f64,
    /// Å⁻¹
    pub alpha2: f64,
    /// eV
    pub e0: f64,
}

impl GroundStateLogDeriv {
    pub fn value(&self, r: f64) -> f64 {
        self.alpha1 / r + self.alpha2
    }

    pub fn derivative(&self, r: f64) -> f64 {
        -self.alpha1 / (r * r)
    }

    /// Radius where `φ₀` changes sign.
    pub fn sign_change(&self) -> f64 {
        self.alpha1 / self.alpha2.abs()
    }
}

/// Solves the Riccati equation with the one-node, pole-free ansatz.
pub fn ground_state_logderiv(system: &RadialSystem, m: u32) -> Result<GroundStateLogDeriv> {
    let lambda = system.lambda(m)?;
    let alpha1 = lambda + 1.0;
    let half_two_mu = 0.5 * system.two_mu_over_hbar2();
    let alpha2 = -half_two_mu * system.spec.b / alpha1;
    let ratio = system.spec.b / alpha1;
    let e0 = system.spec.c - 0.5 * half_two_mu * ratio * ratio;
    Ok(GroundStateLogDeriv { alpha1, alpha2, e0 })
}

/// `φ₀′ + φ₀² + (2μ/ℏ²)(E₀ − V_eff)`, zero for an exact solution.
pub fn riccati_residual(
    logderiv: &GroundStateLogDeriv,
    system: &RadialSystem,
    m: u32,
    r: f64,
) -> Result<f64> {
    let v = system.effective_potential(m, r)?;
    let phi = logderiv.value(r);
    Ok(logderiv.derivative(r) + phi * phi + system.two_mu_over_hbar2() * (logderiv.e0 - v))
}

fn wavenumber(system: &RadialSystem, energy: f64) -> f64 {
    (system.two_mu_over_hbar2() * (system.spec.c - energy)).sqrt()
}

/// Quantum correction `∫ φ₀ (dk₀/dr)(dφ₀/dr)⁻¹ dr` between the ground-state
/// turning points, by quadrature.
pub fn quantum_correction_numeric(
    system: &RadialSystem,
    m: u32,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let ground = ground_state_logderiv(system, m)?;
    let (ra, rb) = system.turning_points(m, ground.e0)?;
    let chord = Chord::new(ra, rb)?;
    let kappa = wavenumber(system, ground.e0);
    let (sum, product) = (ra + rb, ra * rb);
    // k₀(r) = κ√gap / r, so √gap·dk₀/dr = κ(2·ra·rb − (ra+rb)r) / (2r²)
    chord.integrate(quad, |p: ChordPoint| {
        let dk = kappa * (2.0 * product - sum * p.r) / (2.0 * p.r * p.r);
        ground.value(p.r) * dk / ground.derivative(p.r)
    })
}

/// `π(Λ − √(Λ(Λ+1)))`.
pub fn quantum_correction_analytic(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain {
            name: "Lambda",
            value: lambda,
            reason: "quantum correction needs Lambda >= 0",
        });
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(-PI * lambda / (lambda + (lambda * (lambda + 1.0)).sqrt()))
}

/// `∫_{ra}^{rb} k(r) dr` at energy `E`, by quadrature.
pub fn momentum_integral(
    system: &RadialSystem,
    m: u32,
    energy: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let (ra, rb) = system.turning_points(m, energy)?;
    let kappa = wavenumber(system, energy);
    if rb - ra <= f64::EPSILON * rb {
        return Ok(0.0);
    }
    let chord = Chord::new(ra, rb)?;
    Ok(kappa * chord.integrate(quad, |p| p.gap / p.r)?)
}

/// Closed form `π[μB/(ℏ√(−2μ(E−C))) − √(Λ(Λ+1))]` of [`momentum_integral`].
pub fn momentum_integral_closed(system: &RadialSystem, m: u32, energy: f64) -> Result<f64> {
    system.turning_points(m, energy)?;
    let kappa = wavenumber(system, energy);
    let strength = system.centrifugal_strength(m)?;
    Ok(PI * (0.5 * system.two_mu_over_hbar2() * system.spec.b / kappa - strength.sqrt()))
}

/// Energy of the `n`-node state from the quantization condition, found by
/// bisection over the bound-state window.
pub fn solve_energy_eqr(
    system: &RadialSystem,
    m: u32,
    n: u32,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let qc = quantum_correction_numeric(system, m, quad)?;
    let target = (n as f64 + 1.0) * PI + qc;
    let c = system.spec.c;
    let mismatch = |e: f64| -> Result<f64> { Ok(momentum_integral(system, m, e, quad)? - target) };

    let mut lo = system.window_floor(m)?;
    if !lo.is_finite() {
        // V_eff unbounded below only when Λ(Λ+1) = 0; walk down until the
        // classical action drops below the target.
        let mut depth = 0.25 * system.two_mu_over_hbar2() * system.spec.b * system.spec.b;
        loop {
            if mismatch(c - depth)? < 0.0 {
                lo = c - depth;
                break;
            }
            depth *= 4.0;
            if !depth.is_finite() {
                return Err(Error::NumericalFailure(
                    "could not bracket the energy from below".into(),
                ));
            }
        }
    }
    let mut hi = None;
    let mut gap = c - lo;
    for _ in 0..MAX_BISECTION_STEPS {
        gap *= 0.5;
        let e = c - gap;
        if e >= c {
            break;
        }
        if mismatch(e)? > 0.0 {
            hi = Some(e);
            break;
        }
        lo = e;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NumericalFailure(format!("no sign change of the quantization condition for n = {n}"))
    })?;

    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= ENERGY_RELATIVE_TOLERANCE * mid.abs().max(f64::MIN_POSITIVE) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if mismatch(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NumericalFailure(format!(
        "energy bisection did not converge in {MAX_BISECTION_STEPS} steps"
    )))
}

/// The four arcsine-weight integrals used for the momentum and correction terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AppendixIntegral {
    /// `∫ r/√gap dr`
    A1,
    /// `∫ 1/(r√gap) dr`
    A2,
    /// `∫ 1/√gap dr`
    A3,
    /// `∫ √gap/r dr`
    A4,
}

impl AppendixIntegral {
    pub const ALL: [AppendixIntegral; 4] = [Self::A1, Self::A2, Self::A3, Self::A4];
}

fn check_open_interval(ra: f64, rb: f64) -> Result<()> {
    if !(ra > 0.0) || !(rb > ra) || !rb.is_finite() {
        return Err(Error::Domain {
            name: "interval",
            value: rb - ra,
            reason: "need 0 < r_a < r_b",
        });
    }
    Ok(())
}

pub fn appendix_integral_closed(kind: AppendixIntegral, ra: f64, rb: f64) -> Result<f64> {
    check_open_interval(ra, rb)?;
    Ok(match kind {
        AppendixIntegral::A1 => 0.5 * PI * (ra + rb),
        AppendixIntegral::A2 => PI / (ra * rb).sqrt(),
        AppendixIntegral::A3 => PI,
        AppendixIntegral::A4 => {
            // (ra+rb)/2 − √(ra·rb) = (√rb − √ra)²/2
            let d = (rb - ra) / (rb.sqrt() + ra.sqrt());
            0.5 * PI * d * d
        }
    })
}

pub fn appendix_integral_numeric(
    kind: AppendixIntegral,
    ra: f64,
    rb: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_open_interval(ra, rb)?;
    let chord = Chord::new(ra, rb)?;
    match kind {
        AppendixIntegral::A1 => chord.integrate(quad, |p| p.r),
        AppendixIntegral::A2 => chord.integrate(quad, |p| 1.0 / p.r),
        AppendixIntegral::A3 => chord.integrate(quad, |_| 1.0),
        AppendixIntegral::A4 => chord.integrate(quad, |p| p.gap / p.r),
    }
}
