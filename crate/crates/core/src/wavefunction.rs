//! Normalized hyperradial wavefunctions of the Kratzer family and their
//! normalization and orthogonality integrals.
//!
//! `ψ(r) = 𝒩 (2κr)^ν e^{−κr} L_n^{(ν₁)}(2κr)` with
//! `𝒩² = n!(2κ)^D / ((2n+ν₁+1) Γ(ν₁+n+1))`. The normalization constant
//! overflows binary64 for heavy molecules, so it is carried as a logarithm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{QuantumState, RadialSystem};
use crate::quadrature::{GaussLegendre, QuadratureConfig};
use crate::special::{laguerre_unchecked, log_factorial, log_gamma, log_gamma_unchecked};
use crate::spectrum::energy_level;

/// Node count used for the normalization and overlap integrals unless overridden.
pub const NORMALIZATION_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionParams {
    /// Å⁻¹
    pub kappa: f64,
    pub tau: f64,
    pub nu: f64,
    /// Laguerre order, `2ν + D − 2`.
    pub nu1: f64,
    pub nu2: f64,
    /// `ln 𝒩`, with 𝒩 in Å^(−D/2).
    pub ln_norm: f64,
    pub energy: f64,
    pub state: QuantumState,
}

impl WavefunctionParams {
    /// 𝒩 itself; underflows to zero when `ln_norm` is very negative.
    pub fn norm(&self) -> f64 {
        self.ln_norm.exp()
    }

    /// `τ − ν − (D−1)/2`, which equals `n` at an eigenvalue.
    pub fn quantum_condition(&self) -> f64 {
        self.tau - self.nu - 0.5 * (self.state.d as f64 - 1.0)
    }

    fn spread(&self) -> f64 {
        2.0 * self.state.n as f64 + self.nu1 + 1.0
    }

    /// Upper end of the `z = 2κr` range that carries the wavefunction.
    pub fn z_max(&self) -> f64 {
        let s = self.spread();
        2.0 * s + 40.0 * s.sqrt() + 50.0
    }

    /// Lower end of the same range; zero unless `ν₁` is large.
    pub fn z_min(&self) -> f64 {
        let s = self.spread();
        (s - 40.0 * s.sqrt() - 50.0).max(0.0)
    }

    /// Panels for composite quadrature over `[z_min, z_max]`, each about
    /// two widths of the density peak.
    fn panels(&self) -> usize {
        ((self.z_max() - self.z_min()) / (2.0 * self.spread().sqrt())).ceil() as usize
    }

    fn log_envelope(&self, z: f64) -> f64 {
        if z == 0.0 {
            return if self.nu == 0.0 { self.ln_norm } else { f64::NEG_INFINITY };
        }
        self.ln_norm + self.nu * z.ln() - 0.5 * z
    }
}

pub fn wavefunction_params(system: &RadialSystem, state: QuantumState) -> Result<WavefunctionParams> {
    let level = energy_level(system, state)?;
    if !(level.energy < system.spec.c) {
        return Err(Error::NoBoundState {
            energy: level.energy,
            asymptote: system.spec.c,
        });
    }
    let m = state.m() as f64;
    let d = state.d as f64;
    let nu1 = ((m - 2.0) * (m - 2.0) + 4.0 * system.two_mu_over_hbar2() * system.spec.a).sqrt();
    let nu = 0.5 * (nu1 - (d - 2.0));
    let nu2 = 0.5 * (nu1 + 2.0);
    let half_two_mu = 0.5 * system.two_mu_over_hbar2();
    let kappa = half_two_mu * system.spec.b / level.n_tilde;
    let tau = half_two_mu * system.spec.b / kappa;
    let n = state.n as f64;
    let ln_norm = 0.5
        * (log_factorial(state.n) + d * (2.0 * kappa).ln()
            - (2.0 * n + nu1 + 1.0).ln()
            - log_gamma(nu1 + n + 1.0)?);
    Ok(WavefunctionParams {
        kappa,
        tau,
        nu,
        nu1,
        nu2,
        ln_norm,
        energy: level.energy,
        state,
    })
}

/// `ψ(r)` in Å^(−D/2).
pub fn eval_hyperradial(params: &WavefunctionParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            name: "r",
            value: r,
            reason: "must be positive and finite",
        });
    }
    Ok(eval_unchecked(params, r))
}

fn eval_unchecked(params: &WavefunctionParams, r: f64) -> f64 {
    let z = 2.0 * params.kappa * r;
    let lag = laguerre_unchecked(params.state.n, params.nu1, z);
    if lag == 0.0 {
        return 0.0;
    }
    params.log_envelope(z).exp() * lag
}

/// Same wavefunction with the prefactor split as
/// `[n!/((ν₁+2n+1)(ν₁+n)!)]^{1/2} (2κ)^{ν₂} r^ν e^{−κr} L_n^{(ν₁)}(2κr)`.
pub fn eval_with_split_prefactor(params: &WavefunctionParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            name: "r",
            value: r,
            reason: "must be positive and finite",
        });
    }
    let n = params.state.n as f64;
    let ln_pref = 0.5
        * (log_factorial(params.state.n)
            - (params.nu1 + 2.0 * n + 1.0).ln()
            - log_gamma_unchecked(params.nu1 + n + 1.0));
    let two_kappa = 2.0 * params.kappa;
    let ln_rest = params.nu2 * two_kappa.ln() + params.nu * r.ln() - params.kappa * r;
    let lag = laguerre_unchecked(params.state.n, params.nu1, two_kappa * r);
    Ok((ln_pref + ln_rest).exp() * lag)
}

fn node_rule(quad: &QuadratureConfig) -> Result<std::sync::Arc<GaussLegendre>> {
    quad.validate()?;
    Ok(GaussLegendre::cached(quad.node_count))
}

/// `∫₀^∞ |ψ|² r^{D−1} dr`, integrated in `z = 2κr` over `[0, z_max]`.
pub fn normalization_integral(params: &WavefunctionParams, quad: &QuadratureConfig) -> Result<f64> {
    let rule = node_rule(quad)?;
    let n = params.state.n;
    let nf = n as f64;
    let power = params.nu1 + 1.0;
    let ln_const = log_factorial(n)
        - (2.0 * nf + params.nu1 + 1.0).ln()
        - log_gamma_unchecked(params.nu1 + nf + 1.0);
    let density = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let lag = laguerre_unchecked(n, params.nu1, z);
        (ln_const + power * z.ln() - z).exp() * lag * lag
    };
    let (z_min, z_max) = (params.z_min(), params.z_max());
    let peak = std::cell::Cell::new(0.0f64);
    let value = rule.integrate_composite(z_min, z_max, params.panels(), |z| {
        let v = density(z);
        peak.set(peak.get().max(v));
        v
    });
    let edge = density(z_min).max(density(z_max));
    if !value.is_finite() || edge > 1e-20 * peak.get().max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalFailure(format!(
            "normalization integrand not resolved on [{z_min}, {z_max}] for {}",
            params.state
        )));
    }
    Ok(value)
}

/// `∫₀^∞ ψ_a ψ_b r^{D−1} dr` for two states of the same `(l, D)`.
pub fn overlap_integral(
    a: &WavefunctionParams,
    b: &WavefunctionParams,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if a.state.d != b.state.d || a.state.l != b.state.l {
        return Err(Error::Domain {
            name: "state",
            value: f64::NAN,
            reason: "overlap needs two states with the same l and D",
        });
    }
    let rule = node_rule(quad)?;
    let d = a.state.d as f64;
    let r_min = (a.z_min() / (2.0 * a.kappa)).min(b.z_min() / (2.0 * b.kappa));
    let r_max = (a.z_max() / (2.0 * a.kappa)).max(b.z_max() / (2.0 * b.kappa));
    let panels = a.panels().max(b.panels());
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let (za, zb) = (2.0 * a.kappa * r, 2.0 * b.kappa * r);
        let la = laguerre_unchecked(a.state.n, a.nu1, za);
        let lb = laguerre_unchecked(b.state.n, b.nu1, zb);
        let ln = a.log_envelope(za) + b.log_envelope(zb) + (d - 1.0) * r.ln();
        ln.exp() * la * lb
    };
    Ok(rule.integrate_composite(r_min, r_max, panels, integrand))
}

/// `J = (2n+α+1) Γ(α+n+1) / Γ(n+1)`, the value of
/// `∫₀^∞ e^{−z} z^{α+1} [L_n^{(α)}(z)]² dz`.
pub fn coulomb_like_integral_closed(n: u32, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            reason: "need alpha > -1",
        });
    }
    let nf = n as f64;
    let ratio = (log_gamma(alpha + nf + 1.0)? - log_factorial(n)).exp();
    Ok((2.0 * nf + alpha + 1.0) * ratio)
}

/// The same family `∫₀^∞ e^{−z} z^{α+β} [L_n^{(α)}(z)]² dz` from its finite
/// sum over `j`, for general `β` with `α + β + 1 > 0`.
pub fn coulomb_like_integral_sum(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(alpha + beta + 1.0 > 0.0) {
        return Err(Error::Domain {
            name: "alpha + beta",
            value: alpha + beta,
            reason: "need alpha > -1 and alpha + beta + 1 > 0",
        });
    }
    let nf = n as f64;
    let lead = (log_gamma(alpha + nf + 1.0)? - log_factorial(n)).exp();
    let mut sum = 0.0;
    for j in 0..=n {
        let jf = j as f64;
        // Γ(n−j−β)/Γ(−j−β) as the rising product (−j−β)(−j−β+1)…(n−j−β−1)
        let mut rising = 1.0;
        for k in 0..n {
            rising *= -jf - beta + k as f64;
        }
        if rising == 0.0 {
            continue;
        }
        let upper = (log_gamma(alpha + beta + jf + 1.0)? - log_gamma(alpha + jf + 1.0)?).exp();
        let binom = (log_factorial(j) + log_factorial(n - j)).exp();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * rising * upper / binom;
    }
    Ok(lead * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use crate::units::PhysicalConstants;

    fn system(de: f64, re: f64, mu: f64, modified: bool) -> RadialSystem {
        let spec = if modified {
            PotentialSpec::from_modified_kratzer(de, re).unwrap()
        } else {
            PotentialSpec::from_kratzer(de, re).unwrap()
        };
        RadialSystem::new(spec, mu, PhysicalConstants::default()).unwrap()
    }

    fn lih() -> RadialSystem {
        system(2.515283695, 1.5956, 0.8801221, false)
    }

    fn st(n: u32, l: u32, d: u32) -> QuantumState {
        QuantumState::new(n, l, d).unwrap()
    }

    fn quad() -> QuadratureConfig {
        QuadratureConfig {
            node_count: NORMALIZATION_NODES,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn quantum_condition_holds() {
        let p = wavefunction_params(&lih(), st(2, 1, 3)).unwrap();
        assert!((p.quantum_condition() - 2.0).abs() < 1e-12 * p.tau);
        assert_eq!(p.nu, 0.5 * (p.nu1 - 1.0));
        assert_eq!(p.nu2, 0.5 * (p.nu1 + 2.0));
    }

    #[test]
    fn kappa_from_energy_matches() {
        let s = lih();
        for (n, l, d) in [(0, 0, 3), (3, 2, 3), (1, 4, 2)] {
            let p = wavefunction_params(&s, st(n, l, d)).unwrap();
            let from_energy = (s.two_mu_over_hbar2() * (s.spec.c - p.energy)).sqrt();
            assert!(((from_energy - p.kappa) / p.kappa).abs() < 1e-12);
        }
    }

    #[test]
    fn modified_kratzer_kappa_identity() {
        let c = PhysicalConstants::default();
        let de = c.wavenumber_to_ev(87471.42567).unwrap();
        let (re, mu) = (1.1282, 6.860586);
        let s = system(de, re, mu, true);
        let p = wavefunction_params(&s, st(0, 0, 3)).unwrap();
        let two_mu = s.two_mu_over_hbar2();
        // 2κ = 8μ De re / (ℏ²(2n+ν₁+1)) with ν₁ from (2l+D−2)² + 8μDe re²/ℏ²
        let nu1 = (1.0 + 4.0 * two_mu * de * re * re).sqrt();
        assert!(((nu1 - p.nu1) / nu1).abs() < 1e-14);
        let two_kappa = 4.0 * two_mu * de * re / (nu1 + 1.0);
        assert!(((2.0 * p.kappa - two_kappa) / two_kappa).abs() < 1e-12);
    }

    #[test]
    fn split_prefactor_form_is_the_same_function() {
        let s = lih();
        for (n, l, d) in [(0, 0, 3), (2, 1, 2), (4, 3, 4)] {
            let p = wavefunction_params(&s, st(n, l, d)).unwrap();
            for r in [1.2, 1.5956, 2.0, 2.4] {
                let a = eval_hyperradial(&p, r).unwrap();
                let b = eval_with_split_prefactor(&p, r).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn boundary_behaviour() {
        let p = wavefunction_params(&lih(), st(1, 0, 3)).unwrap();
        assert!(p.nu > 0.0);
        let peak = (1..400)
            .map(|k| eval_hyperradial(&p, 0.01 * k as f64).unwrap().abs())
            .fold(0.0, f64::max);
        // r^ν with ν ≈ 51 near the origin
        let near = eval_hyperradial(&p, 0.1).unwrap().abs();
        assert!(near < 1e-30 * peak);
        assert!(eval_hyperradial(&p, 1e-3).unwrap().abs() < near);
        assert!(eval_hyperradial(&p, 200.0 / p.kappa).unwrap().abs() < 1e-30 * peak);
        assert!(eval_hyperradial(&p, 0.0).is_err());
        assert!(eval_hyperradial(&p, -1.0).is_err());
    }

    #[test]
    fn normalization_examples() {
        let c = PhysicalConstants::default();
        let ch = system(c.wavenumber_to_ev(31838.08149).unwrap(), 1.1198, 0.929931, true);
        let i2 = system(1.581791863, 2.662, 63.45223502, false);
        for (s, state) in [(lih(), st(0, 0, 3)), (ch, st(3, 2, 3)), (i2, st(1, 1, 4))] {
            let p = wavefunction_params(&s, state).unwrap();
            let v = normalization_integral(&p, &quad()).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "{state}: {v}");
        }
    }

    #[test]
    fn coulomb_wavefunction_normalized() {
        let s = RadialSystem::new(PotentialSpec::new(0.0, 3.0, 0.0).unwrap(), 1.0, PhysicalConstants::default()).unwrap();
        for (n, l, d) in [(0, 0, 2), (0, 0, 3), (2, 1, 3), (3, 0, 5)] {
            let p = wavefunction_params(&s, st(n, l, d)).unwrap();
            let v = normalization_integral(&p, &quad()).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "{n} {l} {d}: {v}");
        }
    }

    #[test]
    fn overlap_needs_same_channel() {
        let s = lih();
        let a = wavefunction_params(&s, st(0, 0, 3)).unwrap();
        let b = wavefunction_params(&s, st(1, 1, 3)).unwrap();
        assert!(overlap_integral(&a, &b, &quad()).is_err());
        let b = wavefunction_params(&s, st(1, 0, 3)).unwrap();
        assert!(overlap_integral(&a, &b, &quad()).unwrap().abs() < 1e-6);
    }

    #[test]
    fn coulomb_like_closed_values() {
        // Γ(4) = 6
        assert!((coulomb_like_integral_closed(0, 2.0).unwrap() - 6.0).abs() < 1e-13);
        assert!(coulomb_like_integral_closed(1, -1.0).is_err());
    }

    /// ∫₀^∞ e^{−z} z^{α+1} [L_n^α(z)]² dz with z = t², Gauss–Legendre in t.
    fn quadrature_oracle(n: u32, alpha: f64) -> f64 {
        let rule = GaussLegendre::new(400);
        let t_max = (4.0 * n as f64 + 2.0 * alpha + 200.0).sqrt();
        rule.integrate(0.0, t_max, |t| {
            let z = t * t;
            let l = laguerre_unchecked(n, alpha, z);
            (-z).exp() * z.powf(alpha + 1.0) * l * l * 2.0 * t
        })
    }

    #[test]
    fn coulomb_like_against_quadrature() {
        let v = coulomb_like_integral_closed(1, 0.5).unwrap();
        let expected = 3.5 * log_gamma(2.5).unwrap().exp();
        assert!(((v - expected) / expected).abs() < 1e-13);
        for n in 0..=10 {
            for alpha in [0.5, 3.7] {
                let closed = coulomb_like_integral_closed(n, alpha).unwrap();
                let quad = quadrature_oracle(n, alpha);
                assert!(((closed - quad) / closed).abs() < 1e-10, "n={n} α={alpha}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn two_term_sum_equals_closed_form() {
        for n in 0..=10 {
            for alpha in [0.5, 3.7] {
                let closed = coulomb_like_integral_closed(n, alpha).unwrap();
                let sum = coulomb_like_integral_sum(n, alpha, 1.0).unwrap();
                assert!(((closed - sum) / closed).abs() < 1e-12, "n={n} α={alpha}");
            }
        }
        // β = 0 is the ordinary Laguerre orthogonality norm Γ(n+α+1)/n!
        let v = coulomb_like_integral_sum(3, 1.5, 0.0).unwrap();
        let want = (log_gamma(5.5).unwrap() - log_factorial(3)).exp();
        assert!(((v - want) / want).abs() < 1e-12);
    }
}
