//! Command-line front end: spectra, table reproduction, verification and
//! degeneracy listings.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::molecules::{builtin_registry_with, load_molecule_file, lookup, MoleculeRecord, PotentialKind, Source};
use crate::potential::QuantumState;
use crate::render::{Cell, Format, Table};
use crate::spectrum::{degenerate_partners, energy_level, MAX_DIMENSION, MAX_QUANTUM_NUMBER};
use crate::tables::{calibrate, reproduce_table, TableId, TableReport};
use crate::units::{ConstantsOverride, PhysicalConstants};
use crate::verify::{run_verification, Tolerances, VerificationReport, VerifyConfig};

/// Environment variable naming a constants JSON file.
pub const CONSTANTS_ENV: &str = "KRATZER_CONSTANTS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kratzer", version, about = "Bound states of D-dimensional Kratzer-type potentials")]
pub struct Cli {
    #[command(flatten)]
    pub constants: ConstantFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConstantFlags {
    /// ℏc in eV·Å
    #[arg(long, global = true)]
    pub hbar_c: Option<f64>,
    /// Rest energy of one atomic mass unit in eV
    #[arg(long, global = true)]
    pub amu_c2: Option<f64>,
    /// eV per cm⁻¹ (default 2π·ℏc·10⁻⁸)
    #[arg(long, global = true)]
    pub ev_per_wavenumber: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    Kratzer,
    Modified,
}

impl From<PotentialArg> for PotentialKind {
    fn from(p: PotentialArg) -> Self {
        match p {
            PotentialArg::Kratzer => PotentialKind::Kratzer,
            PotentialArg::Modified => PotentialKind::Modified,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Table1,
    Table6,
    User,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Table1 => Source::Table1,
            SourceArg::Table6 => Source::Table6,
            SourceArg::User => Source::User,
        }
    }
}

#[derive(Debug, Args)]
pub struct MoleculeArgs {
    /// Molecule name from the built-in registry or --molecules file
    #[arg(long)]
    pub molecule: String,
    #[arg(long, value_enum, default_value = "kratzer")]
    pub potential: PotentialArg,
    /// Extra molecules (JSON)
    #[arg(long)]
    pub molecules: Option<PathBuf>,
    /// Pick the record from a specific table when a name appears twice
    #[arg(long, value_enum)]
    pub source: Option<SourceArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies for n ≤ n-max, l ≤ l-max in one dimension
    Spectrum {
        #[command(flatten)]
        molecule: MoleculeArgs,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = 5)]
        l_max: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
        dim: u32,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        /// Calibrate the constants on the anchor entries first
        #[arg(long)]
        calibrate: bool,
    },
    /// Recompute a published table (2, 3, 4, 5, 7 or 8)
    Tables {
        table: u32,
        #[arg(long)]
        calibrate: bool,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
    },
    /// Seeded randomized cross-checks; exit code 1 on any failed criterion
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        /// States up to this n are also solved by the shooting oracle
        #[arg(long, default_value_t = 1)]
        oracle_n_max: u32,
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, default_value_t = 50)]
        intervals: usize,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        #[arg(long, default_value_t = 1e-9)]
        tol_qc: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol_eqr: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol_appendix: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol_normalization: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol_oracle: f64,
    },
    /// States sharing (n, D + 2l) with the given one, and their common energy
    Degeneracy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        dim: u32,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
        #[arg(long, default_value = "I2")]
        molecule: String,
        #[arg(long, value_enum, default_value = "kratzer")]
        potential: PotentialArg,
        #[arg(long)]
        molecules: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        #[arg(long)]
        calibrate: bool,
    },
}

/// Parses `args` and runs the command, reading the constants file named by
/// [`CONSTANTS_ENV`] from the process environment.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_file = std::env::var_os(CONSTANTS_ENV).map(PathBuf::from);
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, env_file.as_deref(), out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            code
        }
    }
}

/// Runs a parsed command. `env_file` plays the role of [`CONSTANTS_ENV`].
pub fn run(cli: &Cli, env_file: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, env_file, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Defaults, then the environment file, then the molecule file, then flags.
fn resolve_constants(
    flags: &ConstantFlags,
    env_file: Option<&Path>,
    file_override: Option<&ConstantsOverride>,
) -> Result<PhysicalConstants> {
    let mut c = PhysicalConstants::default();
    if let Some(path) = env_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{CONSTANTS_ENV}={}: {e}", path.display())))?;
        c = ConstantsOverride::from_json(&text)?.apply(c)?;
    }
    if let Some(o) = file_override {
        c = o.apply(c)?;
    }
    let cli = ConstantsOverride {
        hbar_c: flags.hbar_c,
        amu_c2: flags.amu_c2,
        ev_per_wavenumber: flags.ev_per_wavenumber,
    };
    cli.apply(c)
}

/// Registry plus any user file, with the constants in effect.
fn molecule_context(
    flags: &ConstantFlags,
    env_file: Option<&Path>,
    file: Option<&Path>,
    calibrate_first: bool,
) -> Result<(Vec<MoleculeRecord>, PhysicalConstants)> {
    let base = resolve_constants(flags, env_file, None)?;
    let loaded = file.map(|p| load_molecule_file(p, &base)).transpose()?;
    let mut constants = resolve_constants(flags, env_file, loaded.as_ref().map(|f| &f.constants))?;
    if calibrate_first {
        constants = calibrate(&constants)?.constants;
    }
    let mut records = builtin_registry_with(&constants);
    if let Some(f) = loaded {
        records.extend(f.molecules);
    }
    Ok((records, constants))
}

fn find_molecule<'a>(
    records: &'a [MoleculeRecord],
    name: &str,
    kind: PotentialKind,
    source: Option<Source>,
) -> Result<&'a MoleculeRecord> {
    lookup(records, name, kind, source).ok_or_else(|| {
        let mut known: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
        known.sort_unstable();
        known.dedup();
        Error::Validation {
            field: "molecule".into(),
            line: 0,
            message: format!("unknown molecule {name}; known: {}", known.join(", ")),
        }
    })
}

fn warn_ranges(err: &mut dyn Write, n: u32, l: u32, d: u32) {
    if n > MAX_QUANTUM_NUMBER || l > MAX_QUANTUM_NUMBER {
        let _ = writeln!(err, "warning: quantum numbers above {MAX_QUANTUM_NUMBER} are outside the tabulated range");
    }
    if d > MAX_DIMENSION {
        let _ = writeln!(err, "warning: D above {MAX_DIMENSION} is outside the tabulated range");
    }
}

fn dispatch(cli: &Cli, env_file: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Spectrum {
            molecule,
            n_max,
            l_max,
            dim,
            format,
            calibrate,
        } => {
            warn_ranges(err, *n_max, *l_max, *dim);
            let kind = PotentialKind::from(molecule.potential);
            let (records, constants) =
                molecule_context(&cli.constants, env_file, molecule.molecules.as_deref(), *calibrate)?;
            let record = find_molecule(&records, &molecule.molecule, kind, molecule.source.map(Source::from))?;
            let system = record.system(kind, &constants)?;
            let mut table = Table::new(&["molecule", "potential", "n", "l", "dim", "energy_ev"]);
            for n in 0..=*n_max {
                for l in 0..=*l_max {
                    let state = QuantumState::new(n, l, *dim)?;
                    table.push(vec![
                        Cell::text(&record.name),
                        Cell::text(kind.to_string()),
                        Cell::Int(n.into()),
                        Cell::Int(l.into()),
                        Cell::Int((*dim).into()),
                        Cell::Energy(energy_level(&system, state)?.energy),
                    ]);
                }
            }
            out.write_all(table.render((*format).into()).as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Tables {
            table,
            calibrate,
            format,
        } => {
            let id = TableId::from_number(*table)?;
            let constants = resolve_constants(&cli.constants, env_file, None)?;
            let report = reproduce_table(id, &constants, *calibrate)?;
            let text = render_table_report(&report, (*format).into());
            out.write_all(text.as_bytes()).map_err(io_err)?;
            if matches!(Format::from(*format), Format::Csv) {
                let _ = err.write_all(table_summary(&report).as_bytes());
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            seed,
            count,
            n_max,
            oracle_n_max,
            no_oracle,
            intervals,
            format,
            tol_qc,
            tol_eqr,
            tol_appendix,
            tol_normalization,
            tol_oracle,
        } => {
            let constants = resolve_constants(&cli.constants, env_file, None)?;
            let cfg = VerifyConfig {
                seed: *seed,
                count: *count,
                n_max: *n_max,
                oracle_n_max: if *no_oracle { None } else { Some(*oracle_n_max) },
                appendix_intervals: *intervals,
                tolerances: Tolerances {
                    quantum_correction: *tol_qc,
                    eqr_energy: *tol_eqr,
                    appendix: *tol_appendix,
                    normalization: *tol_normalization,
                    oracle: *tol_oracle,
                },
                constants,
            };
            let report = run_verification(&cfg);
            out.write_all(render_verification(&report, (*format).into()).as_bytes())
                .map_err(io_err)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
        }
        Command::Degeneracy {
            n,
            l,
            dim,
            d_max,
            molecule,
            potential,
            molecules,
            format,
            calibrate,
        } => {
            warn_ranges(err, *n, *l, (*dim).max(*d_max));
            let kind = PotentialKind::from(*potential);
            let (records, constants) = molecule_context(&cli.constants, env_file, molecules.as_deref(), *calibrate)?;
            let record = find_molecule(&records, molecule, kind, None)?;
            let system = record.system(kind, &constants)?;
            let state = QuantumState::new(*n, *l, *dim)?;
            let mut table = Table::new(&["molecule", "n", "l", "dim", "M", "energy_ev", "same_bits"]);
            let reference = energy_level(&system, state)?.energy;
            for p in degenerate_partners(state, 2..=*d_max) {
                let e = energy_level(&system, p)?.energy;
                table.push(vec![
                    Cell::text(&record.name),
                    Cell::Int(p.n.into()),
                    Cell::Int(p.l.into()),
                    Cell::Int(p.d.into()),
                    Cell::Int(p.m().into()),
                    Cell::Energy(e),
                    Cell::Bool(e.to_bits() == reference.to_bits()),
                ]);
            }
            out.write_all(table.render((*format).into()).as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}

fn table_rows(report: &TableReport) -> Table {
    let mut t = Table::new(&[
        "molecule",
        "dim",
        "n",
        "l",
        "printed",
        "computed",
        "rel_deviation",
        "other_method",
        "other_printed",
        "other_abs_deviation",
        "note",
    ]);
    for r in &report.rows {
        let (method, printed, dev) = match &r.comparison {
            Some(c) => (Cell::text(c.method.to_string()), Cell::text(&c.printed), Cell::Sci(c.absolute_deviation)),
            None => (Cell::Empty, Cell::Empty, Cell::Empty),
        };
        let note = if r.malformed {
            Cell::text(format!("malformed, read as {}", crate::render::format_fixed(r.reference)))
        } else {
            Cell::Empty
        };
        t.push(vec![
            Cell::text(&r.molecule),
            Cell::Int(r.dim.into()),
            Cell::Int(r.n.into()),
            Cell::Int(r.l.into()),
            Cell::text(&r.printed),
            Cell::Energy(r.computed),
            Cell::Sci(r.relative_deviation),
            method,
            printed,
            dev,
            note,
        ]);
    }
    t
}

/// Text lines describing maxima, anchors, malformed entries and degeneracy.
pub fn table_summary(report: &TableReport) -> String {
    let mut s = String::new();
    let mode = if report.calibrated { "calibrated" } else { "default" };
    let _ = writeln!(s, "Table {} ({}, {mode} constants)", report.table, report.potential);
    let _ = writeln!(
        s,
        "constants: hbar_c = {}, amu_c2 = {}, ev_per_wavenumber = {}",
        report.constants.hbar_c,
        report.constants.amu_c2,
        report.constants.wavenumber_factor()
    );
    for a in &report.anchors {
        let _ = writeln!(
            s,
            "anchor: {} = {} from {} {} in table {} ({})",
            a.constant,
            a.value,
            a.molecule,
            a.state,
            a.table,
            crate::render::format_fixed(a.reference)
        );
    }
    let _ = writeln!(s, "entries: {}", report.rows.len());
    let _ = writeln!(s, "max relative deviation: {:.3e}", report.max_relative_deviation);
    if let Some(d) = report.max_comparison_deviation {
        let _ = writeln!(s, "max absolute deviation from other method: {d:.3e} eV");
    }
    for r in report.malformed() {
        let _ = writeln!(
            s,
            "malformed entry: {} (n={}, l={}, D={}) printed \"{}\", read as {}, recomputed {}",
            r.molecule,
            r.n,
            r.l,
            r.dim,
            r.printed,
            crate::render::format_fixed(r.reference),
            crate::render::format_fixed(r.computed)
        );
    }
    if !report.degeneracy.is_empty() {
        let printed = report.degeneracy.iter().filter(|p| p.printed_equal).count();
        let bits = report.degeneracy.iter().filter(|p| p.computed_bit_identical).count();
        let _ = writeln!(
            s,
            "degenerate pairs (D=2, l+1) / (D=4, l): {}; printed equal: {printed}; computed bit-identical: {bits}",
            report.degeneracy.len()
        );
    }
    s
}

pub fn render_table_report(report: &TableReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => table_rows(report).to_csv(),
        Format::Markdown => {
            let mut s = table_summary(report);
            s.push('\n');
            s.push_str(&table_rows(report).to_markdown());
            if !report.degeneracy.is_empty() {
                let mut t = Table::new(&["molecule", "n", "l (D=4)", "printed D=2", "printed D=4", "printed equal", "bit-identical"]);
                for p in &report.degeneracy {
                    t.push(vec![
                        Cell::text(&p.molecule),
                        Cell::Int(p.n.into()),
                        Cell::Int(p.l.into()),
                        Cell::text(&p.printed_d2),
                        Cell::text(&p.printed_d4),
                        Cell::Bool(p.printed_equal),
                        Cell::Bool(p.computed_bit_identical),
                    ]);
                }
                s.push('\n');
                s.push_str(&t.to_markdown());
            }
            s
        }
    }
}

fn verification_summary(report: &VerificationReport) -> Table {
    let mut t = Table::new(&["criterion", "max_residual", "tolerance", "checked", "passed"]);
    for c in &report.summary {
        t.push(vec![
            Cell::text(&c.name),
            Cell::Sci(c.max_residual),
            Cell::Sci(c.tolerance),
            Cell::Int(c.checked as i64),
            Cell::Bool(c.passed),
        ]);
    }
    t
}

pub fn render_verification(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "case", "potential", "de", "re", "mu", "n", "l", "dim", "e_closed", "e_eqr_numeric",
                "e_oracle", "q_c_numeric", "q_c_analytic", "normalization",
            ]);
            for r in &report.rows {
                t.push(vec![
                    Cell::Int(r.case as i64),
                    Cell::text(r.kind.to_string()),
                    Cell::Energy(r.de),
                    Cell::Energy(r.re),
                    Cell::Energy(r.mu),
                    Cell::Int(r.n.into()),
                    Cell::Int(r.l.into()),
                    Cell::Int(r.d.into()),
                    Cell::Energy(r.e_closed),
                    Cell::Energy(r.e_eqr_numeric),
                    r.e_oracle.map_or(Cell::Empty, Cell::Energy),
                    Cell::Energy(r.q_c_numeric),
                    Cell::Energy(r.q_c_analytic),
                    Cell::Energy(r.normalization),
                ]);
            }
            t.to_csv()
        }
        Format::Markdown => {
            let c = &report.config;
            let mut s = format!(
                "verification: seed {}, {} potentials, n <= {}, {} intervals\n\n",
                c.seed, c.count, c.n_max, c.appendix_intervals
            );
            s.push_str(&verification_summary(report).to_markdown());
            for f in &report.failures {
                let _ = writeln!(s, "\nfailure: {f}");
            }
            let _ = writeln!(s, "\nresult: {}", if report.passed() { "pass" } else { "FAIL" });
            s
        }
    }
}
