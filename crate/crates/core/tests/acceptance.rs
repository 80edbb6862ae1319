//! Acceptance run: one line per criterion, non-zero exit on any failure.
//!
//! Build with optimizations (the workspace test profile does) so the
//! runtime budgets are meaningful.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kratzer_eqr::eqr::{appendix_integral_closed, appendix_integral_numeric, AppendixIntegral};
use kratzer_eqr::molecules::{builtin_registry, lookup, MoleculeRecord, PotentialKind, Source};
use kratzer_eqr::numerov::{node_count, shoot_level, solve_numerov_default, RadialGrid};
use kratzer_eqr::quadrature::GaussLegendre;
use kratzer_eqr::special::{assoc_laguerre, kummer_1f1, log_factorial, log_gamma};
use kratzer_eqr::tables::{reproduce_table, TableId, TableReport};
use kratzer_eqr::verify::{random_intervals, run_verification, VerifyConfig};
use kratzer_eqr::wavefunction::{
    coulomb_like_integral_closed, eval_hyperradial, normalization_integral, overlap_integral,
    wavefunction_params, WavefunctionParams,
};
use kratzer_eqr::{energy_level, PhysicalConstants, QuadratureConfig, QuantumState, Result};

const DEFAULT_TOL: f64 = 2e-5;
const CALIBRATED_TOL: f64 = 1e-7;
const NU_ABS_TOL: f64 = 1e-4;
const QC_TOL: f64 = 1e-9;
const EQR_TOL: f64 = 1e-10;
const APPENDIX_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-8;
const ORTHO_TOL: f64 = 1e-6;
const BRIDGE_TOL: f64 = 1e-12;
const LAGUERRE_INTEGRAL_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn table_pair(ids: &[TableId], check_degeneracy: bool) -> Result<Outcome> {
    let base = PhysicalConstants::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for &id in ids {
        let default = reproduce_table(id, &base, false)?;
        let calibrated = reproduce_table(id, &base, true)?;
        ok &= default.max_relative_deviation <= DEFAULT_TOL;
        ok &= calibrated.max_relative_deviation <= CALIBRATED_TOL;
        parts.push(format!(
            "{id}: {} entries, default {:.2e}, calibrated {:.2e}",
            default.rows.len(),
            default.max_relative_deviation,
            calibrated.max_relative_deviation
        ));
        if check_degeneracy {
            let (pairs, printed, bits) = degeneracy_counts(&calibrated);
            ok &= pairs > 0 && printed == pairs && bits == pairs;
            parts.push(format!("{pairs} pairs, printed equal {printed}, bit-identical {bits}"));
        }
    }
    Ok(outcome(ok, parts.join("; ")))
}

fn degeneracy_counts(report: &TableReport) -> (usize, usize, usize) {
    let d = &report.degeneracy;
    (
        d.len(),
        d.iter().filter(|p| p.printed_equal).count(),
        d.iter().filter(|p| p.computed_bit_identical).count(),
    )
}

fn criterion_1() -> Result<Outcome> {
    table_pair(&[TableId::T2, TableId::T3], false)
}

fn criterion_2() -> Result<Outcome> {
    table_pair(&[TableId::T4, TableId::T5], true)
}

fn criterion_3() -> Result<Outcome> {
    let mut out = table_pair(&[TableId::T7, TableId::T8], false)?;
    let base = PhysicalConstants::default();
    let mut malformed = Vec::new();
    for id in [TableId::T7, TableId::T8] {
        let report = reproduce_table(id, &base, true)?;
        let nu = report.max_comparison_deviation.unwrap_or(f64::INFINITY);
        out.passed &= nu <= NU_ABS_TOL;
        out.detail.push_str(&format!("; {id} NU max abs {nu:.2e} eV"));
        for r in report.malformed() {
            malformed.push(format!(
                "{id} {} ({},{},{}) \"{}\" -> {:.12}",
                r.molecule, r.n, r.l, r.dim, r.printed, r.reference
            ));
            out.passed &= ((r.computed - r.reference) / r.reference).abs() <= CALIBRATED_TOL;
        }
    }
    out.passed &= malformed.len() == 1;
    out.detail.push_str(&format!("; malformed: {}", malformed.join(", ")));
    Ok(out)
}

fn verification(n_max: u32, intervals: usize, count: usize) -> VerifyConfig {
    VerifyConfig {
        count,
        n_max,
        oracle_n_max: None,
        appendix_intervals: intervals,
        ..VerifyConfig::default()
    }
}

fn criterion_4() -> Result<Outcome> {
    let report = run_verification(&verification(5, 0, 100));
    let pick = |name: &str| report.summary.iter().find(|c| c.name == name).cloned();
    let (qc, eqr) = (pick("quantum correction"), pick("numerical EQR energy"));
    let (Some(qc), Some(eqr)) = (qc, eqr) else {
        return Ok(outcome(false, "criteria missing from report".into()));
    };
    let passed = report.failures.is_empty()
        && qc.max_residual < QC_TOL
        && eqr.max_residual < EQR_TOL
        && qc.checked == 100
        && eqr.checked == 600;
    Ok(outcome(
        passed,
        format!(
            "{} potentials, {} states; max |dQc| {:.2e}, max rel dE {:.2e}, {} failures",
            qc.checked,
            eqr.checked,
            qc.max_residual,
            eqr.max_residual,
            report.failures.len()
        ),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let quad = QuadratureConfig::default();
    let intervals = random_intervals(VerifyConfig::default().seed, 50);
    let mut worst = 0.0f64;
    let mut narrowest = f64::INFINITY;
    for &(ra, rb) in &intervals {
        narrowest = narrowest.min((rb - ra) / rb);
        for kind in AppendixIntegral::ALL {
            let closed = appendix_integral_closed(kind, ra, rb)?;
            let numeric = appendix_integral_numeric(kind, ra, rb, &quad)?;
            worst = worst.max(((numeric - closed) / closed).abs());
        }
    }
    Ok(outcome(
        worst < APPENDIX_TOL,
        format!(
            "{} intervals x 4 integrals, max rel {worst:.2e}, narrowest (rb-ra)/rb {narrowest:.1e}",
            intervals.len()
        ),
    ))
}

fn molecule_systems() -> Vec<(MoleculeRecord, PotentialKind)> {
    builtin_registry()
        .into_iter()
        .map(|r| {
            let kind = match r.source {
                Source::Table6 => PotentialKind::Modified,
                _ => PotentialKind::Kratzer,
            };
            (r, kind)
        })
        .collect()
}

fn analytic_nodes(p: &WavefunctionParams) -> Result<u32> {
    let (lo, hi) = (p.z_min() / (2.0 * p.kappa), p.z_max() / (2.0 * p.kappa));
    let lo = lo.max(1e-6 * hi);
    let samples = (0..=4000)
        .map(|i| eval_hyperradial(p, lo + (hi - lo) * i as f64 / 4000.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(node_count(&samples))
}

/// Largest relative gap between `L_n^α(z)` and `C(n+α, n)·₁F₁(−n; α+1; z)`,
/// measured against the size of the polynomial terms.
fn laguerre_bridge() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=10u32 {
        for alpha in [0.5, 2.0, 7.3, 41.0, 350.5] {
            for i in 0..=40 {
                let z = 0.5 * i as f64;
                let lag = assoc_laguerre(n, alpha, z)?;
                let ratio = (log_factorial(n) + log_gamma(alpha + 1.0)? - log_gamma(alpha + n as f64 + 1.0)?).exp();
                let f = kummer_1f1(-(n as f64), alpha + 1.0, z)?;
                let (mut scale, mut term) = (0.0, 1.0f64);
                for k in 0..=n {
                    scale += term.abs();
                    let kf = k as f64;
                    term *= (kf - n as f64) / (alpha + 1.0 + kf) * z / (kf + 1.0);
                }
                worst = worst.max((lag * ratio - f).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// `∫₀^∞ e^{−z} z^{α+1} [L_n^{(α)}(z)]² dz` by quadrature against its closed form.
fn laguerre_integral() -> Result<f64> {
    let rule = GaussLegendre::new(64);
    let mut worst = 0.0f64;
    for n in 0..=10u32 {
        for alpha in [0.0, 0.5, 3.7, 25.0, 180.0] {
            let s = 2.0 * n as f64 + alpha + 1.0;
            let (lo, hi) = ((s - 40.0 * s.sqrt() - 50.0).max(0.0), 2.0 * s + 40.0 * s.sqrt() + 50.0);
            // scaled by Γ(α+n+1)/n! so large α stays in range
            let ln_scale = log_gamma(alpha + n as f64 + 1.0)? - log_factorial(n);
            // in t = √z the fractional power at the origin becomes smooth
            let (t_lo, t_hi) = (lo.sqrt(), hi.sqrt());
            let panels = (4.0 * (t_hi - t_lo)).ceil() as usize;
            let numeric = rule.integrate_composite(t_lo, t_hi, panels, |t| {
                if t <= 0.0 {
                    return 0.0;
                }
                let z = t * t;
                let l = assoc_laguerre(n, alpha, z).unwrap_or(f64::NAN);
                2.0 * t * ((alpha + 1.0) * z.ln() - z - ln_scale).exp() * l * l
            });
            let closed = coulomb_like_integral_closed(n, alpha)? / ln_scale.exp();
            worst = worst.max(((numeric - closed) / closed).abs());
        }
    }
    Ok(worst)
}

fn criterion_6() -> Result<Outcome> {
    let quad = QuadratureConfig::default();
    let constants = PhysicalConstants::default();
    let (mut norm_worst, mut ortho_worst) = (0.0f64, 0.0f64);
    let (mut states, mut pairs, mut node_mismatch) = (0usize, 0usize, 0usize);
    for (record, kind) in molecule_systems() {
        let system = record.system(kind, &constants)?;
        for d in 2..=4 {
            for l in 0..=5 {
                let params = (0..=5)
                    .map(|n| wavefunction_params(&system, QuantumState::new(n, l, d)?))
                    .collect::<Result<Vec<_>>>()?;
                for p in &params {
                    norm_worst = norm_worst.max((normalization_integral(p, &quad)? - 1.0).abs());
                    if analytic_nodes(p)? != p.state.n {
                        node_mismatch += 1;
                    }
                    states += 1;
                }
                for i in 0..=4 {
                    for j in (i + 1)..=4 {
                        ortho_worst = ortho_worst.max(overlap_integral(&params[i], &params[j], &quad)?.abs());
                        pairs += 1;
                    }
                }
            }
        }
    }
    let bridge = laguerre_bridge()?;
    let integral = laguerre_integral()?;
    let passed = norm_worst < NORM_TOL
        && ortho_worst < ORTHO_TOL
        && node_mismatch == 0
        && bridge < BRIDGE_TOL
        && integral < LAGUERRE_INTEGRAL_TOL;
    Ok(outcome(
        passed,
        format!(
            "{states} states: max |norm-1| {norm_worst:.2e}, {node_mismatch} node mismatches; \
             {pairs} pairs: max overlap {ortho_worst:.2e}; Laguerre/1F1 {bridge:.2e}; \
             Laguerre integral {integral:.2e}"
        ),
    ))
}

fn oracle_sample() -> Vec<(&'static str, PotentialKind, Source)> {
    vec![
        ("LiH", PotentialKind::Kratzer, Source::Table1),
        ("I2", PotentialKind::Kratzer, Source::Table1),
        ("N2", PotentialKind::Modified, Source::Table6),
        ("CH", PotentialKind::Modified, Source::Table6),
    ]
}

fn criterion_7() -> Result<Outcome> {
    let constants = PhysicalConstants::default();
    let registry = builtin_registry();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, kind, source) in oracle_sample() {
        let record = lookup(&registry, name, kind, Some(source)).expect("sample molecule in registry");
        let system = record.system(kind, &constants)?;
        for d in [2, 3] {
            for k in 0..=2 {
                let state = QuantumState::new(k, k, d)?;
                let exact = energy_level(&system, state)?.energy;
                let oracle = solve_numerov_default(&system, state.m(), state.n)?.energy;
                worst = worst.max(((oracle - exact) / exact).abs());
                count += 1;
            }
        }
    }

    // fixed box, spacing halved twice; errors should drop by 2⁴ each time
    let lih = lookup(&registry, "LiH", PotentialKind::Kratzer, Some(Source::Table1)).expect("LiH");
    let system = lih.system(PotentialKind::Kratzer, &constants)?;
    let state = QuantumState::new(0, 0, 3)?;
    let exact = energy_level(&system, state)?.energy;
    let reference = RadialGrid::for_state(&system, state.m(), state.n)?;
    let mut errors = Vec::new();
    for points in [2001, 4001, 8001] {
        let grid = RadialGrid::new(reference.r_min, reference.r_max, points)?;
        errors.push((shoot_level(&system, state.m(), state.n, &grid)? - exact).abs());
    }
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    let fourth_order = ratios.iter().all(|r| (12.0..=20.0).contains(r));

    Ok(outcome(
        count == 24 && worst < ORACLE_TOL && fourth_order,
        format!(
            "{count} states, max rel {worst:.2e}; error ratios under halving {:.2}, {:.2}",
            ratios[0], ratios[1]
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>, Duration); 7] = [
        ("1 tables 2-3 (3D Kratzer)", criterion_1, Duration::from_secs(1)),
        ("2 tables 4-5 (D=2..4, degeneracy)", criterion_2, Duration::from_secs(1)),
        ("3 tables 7-8 (modified Kratzer)", criterion_3, Duration::from_secs(1)),
        ("4 EQR self-consistency", criterion_4, Duration::from_secs(20)),
        ("5 arcsine integrals", criterion_5, Duration::from_secs(5)),
        ("6 wavefunctions", criterion_6, Duration::from_secs(30)),
        ("7 shooting oracle", criterion_7, Duration::from_secs(60)),
    ];
    let total = Instant::now();
    let mut all = true;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        println!(
            "criterion {name}: {} ({detail}; {:.2} s of {} s)",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance total {:.1} s", total.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
