//! Seeded randomized cross-checks of the closed forms against the numerical
//! quantization pipeline, the wavefunction normalization and the shooting
//! solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eqr::{
    appendix_integral_closed, appendix_integral_numeric, quantum_correction_analytic,
    quantum_correction_numeric, solve_energy_eqr, AppendixIntegral,
};
use crate::error::Result;
use crate::molecules::PotentialKind;
use crate::numerov::solve_numerov_default;
use crate::potential::{PotentialSpec, QuantumState, RadialSystem};
use crate::quadrature::QuadratureConfig;
use crate::spectrum::energy_level;
use crate::units::PhysicalConstants;
use crate::wavefunction::{normalization_integral, wavefunction_params};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute, on `Q_c`.
    pub quantum_correction: f64,
    /// Relative, numerical quantization rule vs closed form.
    pub eqr_energy: f64,
    /// Relative, quadrature vs closed form of the arcsine-weight integrals.
    pub appendix: f64,
    /// Absolute, on the normalization integral.
    pub normalization: f64,
    /// Relative, shooting solver vs closed form.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quantum_correction: 1e-9,
            eqr_energy: 1e-10,
            appendix: 1e-12,
            normalization: 1e-8,
            oracle: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random potentials.
    pub count: usize,
    /// States `n = 0..=n_max` are checked for every potential.
    pub n_max: u32,
    /// States up to this `n` also go through the shooting solver; `None` skips it.
    pub oracle_n_max: Option<u32>,
    pub appendix_intervals: usize,
    pub tolerances: Tolerances,
    pub constants: PhysicalConstants,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            count: 100,
            n_max: 5,
            oracle_n_max: Some(1),
            appendix_intervals: 50,
            tolerances: Tolerances::default(),
            constants: PhysicalConstants::default(),
        }
    }
}

/// A random potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomCase {
    pub index: usize,
    pub kind: PotentialKind,
    /// eV
    pub de: f64,
    /// Å
    pub re: f64,
    /// amu
    pub mu: f64,
    pub m: u32,
}

impl RandomCase {
    /// The lowest-dimensional state with this `M`: D = 2 or 3.
    pub fn state(&self, n: u32) -> Result<QuantumState> {
        let d = 2 + (self.m - 2) % 2;
        QuantumState::new(n, (self.m - d) / 2, d)
    }

    pub fn system(&self, constants: &PhysicalConstants) -> Result<RadialSystem> {
        let spec = match self.kind {
            PotentialKind::Kratzer => PotentialSpec::from_kratzer(self.de, self.re)?,
            PotentialKind::Modified => PotentialSpec::from_modified_kratzer(self.de, self.re)?,
        };
        RadialSystem::new(spec, self.mu, *constants)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// `count` potentials with De log-uniform on [0.1, 20] eV, re uniform on
/// [0.5, 3] Å, μ log-uniform on [0.5, 100] amu and M uniform on 2..=12.
pub fn random_cases(seed: u64, count: usize) -> Vec<RandomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|index| RandomCase {
            index,
            kind: if rng.gen_bool(0.5) {
                PotentialKind::Kratzer
            } else {
                PotentialKind::Modified
            },
            de: log_uniform(&mut rng, 0.1, 20.0),
            re: rng.gen_range(0.5..3.0),
            mu: log_uniform(&mut rng, 0.5, 100.0),
            m: rng.gen_range(2..=12),
        })
        .collect()
}

/// `(r_a, r_b)` pairs with r_a log-uniform on [1e-3, 10] Å and a relative
/// width log-uniform on [1e-6, 1e3]; the first few are near-degenerate.
pub fn random_intervals(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_a11e);
    (0..count)
        .map(|i| {
            let ra = log_uniform(&mut rng, 1e-3, 10.0);
            let width = if i < count / 5 {
                log_uniform(&mut rng, 1e-6, 1e-3)
            } else {
                log_uniform(&mut rng, 1e-6, 1e3)
            };
            (ra, ra * (1.0 + width))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub case: usize,
    pub kind: PotentialKind,
    pub de: f64,
    pub re: f64,
    pub mu: f64,
    pub n: u32,
    pub l: u32,
    pub d: u32,
    pub e_closed: f64,
    pub e_eqr_numeric: f64,
    pub e_oracle: Option<f64>,
    pub q_c_numeric: f64,
    pub q_c_analytic: f64,
    pub normalization: f64,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub quantum_correction: f64,
    pub eqr_energy: f64,
    pub normalization: f64,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub ra: f64,
    pub rb: f64,
    pub kind: AppendixIntegral,
    pub closed: f64,
    pub numeric: f64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub checked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: VerifyConfig,
    pub rows: Vec<StateRow>,
    pub appendix: Vec<AppendixRow>,
    /// Computations that returned an error, with their message.
    pub failures: Vec<String>,
    pub summary: Vec<Criterion>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|c| c.passed)
    }
}

fn check_case(case: &RandomCase, cfg: &VerifyConfig, quad: &QuadratureConfig) -> Result<Vec<StateRow>> {
    let system = case.system(&cfg.constants)?;
    let q_c_numeric = quantum_correction_numeric(&system, case.m, quad)?;
    let q_c_analytic = quantum_correction_analytic(system.lambda(case.m)?)?;
    (0..=cfg.n_max)
        .map(|n| {
            let state = case.state(n)?;
            let e_closed = energy_level(&system, state)?.energy;
            let e_eqr_numeric = solve_energy_eqr(&system, case.m, n, quad)?;
            let normalization = normalization_integral(&wavefunction_params(&system, state)?, quad)?;
            let e_oracle = match cfg.oracle_n_max {
                Some(k) if n <= k => Some(solve_numerov_default(&system, case.m, n)?.energy),
                _ => None,
            };
            let rel = |e: f64| ((e - e_closed) / e_closed).abs();
            Ok(StateRow {
                case: case.index,
                kind: case.kind,
                de: case.de,
                re: case.re,
                mu: case.mu,
                n,
                l: state.l,
                d: state.d,
                e_closed,
                e_eqr_numeric,
                e_oracle,
                q_c_numeric,
                q_c_analytic,
                normalization,
                residuals: Residuals {
                    quantum_correction: (q_c_numeric - q_c_analytic).abs(),
                    eqr_energy: rel(e_eqr_numeric),
                    normalization: (normalization - 1.0).abs(),
                    oracle: e_oracle.map(rel),
                },
            })
        })
        .collect()
}

fn criterion(name: &str, residuals: impl Iterator<Item = f64>, tolerance: f64) -> Criterion {
    let (mut max, mut checked) = (0.0f64, 0);
    let mut finite = true;
    for r in residuals {
        finite &= r.is_finite();
        max = max.max(r);
        checked += 1;
    }
    Criterion {
        name: name.to_string(),
        max_residual: max,
        tolerance,
        checked,
        passed: finite && max <= tolerance,
    }
}

/// Runs every check. Cases run in parallel; row order follows the case index.
pub fn run_verification(cfg: &VerifyConfig) -> VerificationReport {
    let quad = QuadratureConfig::default();
    let cases = random_cases(cfg.seed, cfg.count);
    let results: Vec<(RandomCase, Result<Vec<StateRow>>)> = cases
        .par_iter()
        .map(|c| (*c, check_case(c, cfg, &quad)))
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (case, result) in results {
        match result {
            Ok(r) => rows.extend(r),
            Err(e) => failures.push(format!(
                "case {} ({} De={} re={} mu={} M={}): {e}",
                case.index, case.kind, case.de, case.re, case.mu, case.m
            )),
        }
    }

    let mut appendix = Vec::new();
    for (ra, rb) in random_intervals(cfg.seed, cfg.appendix_intervals) {
        for kind in AppendixIntegral::ALL {
            let pair = appendix_integral_closed(kind, ra, rb)
                .and_then(|c| Ok((c, appendix_integral_numeric(kind, ra, rb, &quad)?)));
            match pair {
                Ok((closed, numeric)) => appendix.push(AppendixRow {
                    ra,
                    rb,
                    kind,
                    closed,
                    numeric,
                    relative_residual: ((numeric - closed) / closed).abs(),
                }),
                Err(e) => failures.push(format!("{kind:?} on ({ra}, {rb}): {e}")),
            }
        }
    }

    let t = &cfg.tolerances;
    let mut summary = vec![
        criterion(
            "quantum correction",
            rows.iter().filter(|r| r.n == 0).map(|r| r.residuals.quantum_correction),
            t.quantum_correction,
        ),
        criterion("numerical EQR energy", rows.iter().map(|r| r.residuals.eqr_energy), t.eqr_energy),
        criterion("appendix integrals", appendix.iter().map(|a| a.relative_residual), t.appendix),
        criterion("normalization", rows.iter().map(|r| r.residuals.normalization), t.normalization),
    ];
    if cfg.oracle_n_max.is_some() {
        summary.push(criterion(
            "shooting oracle",
            rows.iter().filter_map(|r| r.residuals.oracle),
            t.oracle,
        ));
    }
    summary.push(Criterion {
        name: "computations completed".into(),
        max_residual: failures.len() as f64,
        tolerance: 0.0,
        checked: cfg.count + cfg.appendix_intervals * AppendixIntegral::ALL.len(),
        passed: failures.is_empty(),
    });

    VerificationReport {
        config: *cfg,
        rows,
        appendix,
        failures,
        summary,
    }
}
