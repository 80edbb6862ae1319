//! Built-in diatomic constants, molecule files and calibration of the
//! mass-energy and wavenumber constants against reference energies.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, QuantumState, RadialSystem};
use crate::spectrum::energy_level;
use crate::units::{ConstantsOverride, PhysicalConstants};

/// Search interval for the calibrated `amu_c2` (eV).
pub const AMU_C2_RANGE: (f64, f64) = (9.0e8, 9.6e8);
/// Search interval for the calibrated cm⁻¹ → eV factor.
pub const WAVENUMBER_FACTOR_RANGE: (f64, f64) = (1.2e-4, 1.3e-4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Table1,
    Table6,
    User,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Table1 => "table1",
            Source::Table6 => "table6",
            Source::User => "user",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    /// `−De(2re/r − re²/r²)`
    Kratzer,
    /// `De((r − re)/r)²`
    Modified,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialKind::Kratzer => "kratzer",
            PotentialKind::Modified => "modified",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeRecord {
    pub name: String,
    /// Dissociation energy in eV under the constants the record was built with.
    pub de: f64,
    /// Å
    pub re: f64,
    /// Reduced mass, amu.
    pub mu: f64,
    pub source: Source,
    /// Original value when `De` was given in cm⁻¹.
    pub de_wavenumber: Option<f64>,
}

impl MoleculeRecord {
    pub fn from_ev(name: &str, de: f64, re: f64, mu: f64, source: Source) -> Result<Self> {
        let record = Self {
            name: name.to_string(),
            de,
            re,
            mu,
            source,
            de_wavenumber: None,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn from_wavenumber(
        name: &str,
        de_wavenumber: f64,
        re: f64,
        mu: f64,
        source: Source,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let record = Self {
            name: name.to_string(),
            de: constants.wavenumber_to_ev(de_wavenumber)?,
            re,
            mu,
            source,
            de_wavenumber: Some(de_wavenumber),
        };
        record.validate()?;
        Ok(record)
    }

    fn validate(&self) -> Result<()> {
        for (field, value) in [("De", self.de), ("re", self.re), ("mu", self.mu)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Validation {
                    field: field.into(),
                    line: 0,
                    message: format!("{}: must be positive and finite, got {value}", self.name),
                });
            }
        }
        Ok(())
    }

    /// `De` in eV, reconverted from cm⁻¹ under `constants` when that is how it was given.
    pub fn dissociation_energy(&self, constants: &PhysicalConstants) -> Result<f64> {
        match self.de_wavenumber {
            Some(w) => constants.wavenumber_to_ev(w),
            None => Ok(self.de),
        }
    }

    pub fn potential(&self, kind: PotentialKind, constants: &PhysicalConstants) -> Result<PotentialSpec> {
        let de = self.dissociation_energy(constants)?;
        match kind {
            PotentialKind::Kratzer => PotentialSpec::from_kratzer(de, self.re),
            PotentialKind::Modified => PotentialSpec::from_modified_kratzer(de, self.re),
        }
    }

    pub fn system(&self, kind: PotentialKind, constants: &PhysicalConstants) -> Result<RadialSystem> {
        RadialSystem::new(self.potential(kind, constants)?, self.mu, *constants)
    }

    pub fn energy(&self, kind: PotentialKind, state: QuantumState, constants: &PhysicalConstants) -> Result<f64> {
        Ok(energy_level(&self.system(kind, constants)?, state)?.energy)
    }
}

const TABLE1: [(&str, f64, f64, f64); 6] = [
    ("LiH", 2.515283695, 1.5956, 0.8801221),
    ("I2", 1.581791863, 2.662, 63.45223502),
    ("O2", 5.156658828, 1.208, 7.997457504),
    ("HCl", 4.619061175, 1.2746, 0.9801045),
    ("NO", 8.043782568, 1.1508, 7.468441),
    ("CO", 10.84514471, 1.1282, 6.860586),
];

/// `De` in cm⁻¹.
const TABLE6: [(&str, f64, f64, f64); 4] = [
    ("N2", 96288.03528, 1.0940, 7.00335),
    ("CO", 87471.42567, 1.1282, 6.860586),
    ("NO", 64877.06229, 1.1508, 7.468441),
    ("CH", 31838.08149, 1.1198, 0.929931),
];

/// The ten built-in records, Table 1 species first.
pub fn builtin_registry() -> Vec<MoleculeRecord> {
    builtin_registry_with(&PhysicalConstants::default())
}

pub fn builtin_registry_with(constants: &PhysicalConstants) -> Vec<MoleculeRecord> {
    let ev = TABLE1
        .iter()
        .map(|&(name, de, re, mu)| MoleculeRecord::from_ev(name, de, re, mu, Source::Table1));
    let wn = TABLE6.iter().map(|&(name, w, re, mu)| {
        MoleculeRecord::from_wavenumber(name, w, re, mu, Source::Table6, constants)
    });
    ev.chain(wn)
        .collect::<Result<Vec<_>>>()
        .expect("built-in constants are valid")
}

/// Finds `name` (case-insensitive, `I₂` and `I2` alike). Without an explicit
/// source the record from the table that used `kind` wins: Table 1 for the
/// Kratzer potential, Table 6 for the modified one.
pub fn lookup<'a>(
    records: &'a [MoleculeRecord],
    name: &str,
    kind: PotentialKind,
    source: Option<Source>,
) -> Option<&'a MoleculeRecord> {
    let wanted = normalize_name(name);
    let matches: Vec<&MoleculeRecord> = records
        .iter()
        .filter(|r| normalize_name(&r.name) == wanted)
        .filter(|r| source.map_or(true, |s| r.source == s))
        .collect();
    let preferred = match kind {
        PotentialKind::Kratzer => Source::Table1,
        PotentialKind::Modified => Source::Table6,
    };
    matches
        .iter()
        .find(|r| r.source == Source::User)
        .or_else(|| matches.iter().find(|r| r.source == preferred))
        .or_else(|| matches.first())
        .copied()
}

fn normalize_name(name: &str) -> String {
    name.chars()
        .map(|c| match c {
            '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap(),
            _ => c,
        })
        .collect::<String>()
        .to_ascii_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[serde(rename = "eV")]
    Ev,
    #[serde(rename = "cm-1")]
    Wavenumber,
}

/// One entry of the `molecules` array of a molecule file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRecord {
    name: String,
    #[serde(rename = "De", deserialize_with = "positive_de")]
    de: f64,
    #[serde(rename = "De_unit", default = "default_unit")]
    de_unit: EnergyUnit,
    #[serde(deserialize_with = "positive_re")]
    re: f64,
    #[serde(deserialize_with = "positive_mu")]
    mu: f64,
    #[serde(default = "default_source")]
    source: Source,
}

fn default_unit() -> EnergyUnit {
    EnergyUnit::Ev
}

fn default_source() -> Source {
    Source::User
}

const FIELD_MARK: &str = "invalid field `";

fn positive<'de, D: Deserializer<'de>>(d: D, field: &str) -> std::result::Result<f64, D::Error> {
    let v = f64::deserialize(d)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(serde::de::Error::custom(format!(
            "{FIELD_MARK}{field}`: must be positive and finite, got {v}"
        )))
    }
}

fn positive_de<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    positive(d, "De")
}

fn positive_re<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    positive(d, "re")
}

fn positive_mu<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    positive(d, "mu")
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDocument {
    #[serde(default, skip_serializing_if = "ConstantsOverride::is_empty")]
    constants: ConstantsOverride,
    molecules: Vec<FileRecord>,
}

/// Contents of a molecule file.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeFile {
    pub constants: ConstantsOverride,
    pub molecules: Vec<MoleculeRecord>,
}

fn json_error(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    if let Some(rest) = message.strip_prefix(FIELD_MARK) {
        if let Some(end) = rest.find('`') {
            return Error::Validation {
                field: rest[..end].to_string(),
                line: e.line(),
                message: rest[end + 1..].trim_start_matches(':').trim().to_string(),
            };
        }
    }
    Error::Parse {
        line: e.line(),
        message,
    }
}

/// Parses a molecule document. `De` given in cm⁻¹ is converted with the
/// file's own constants applied over `base`.
pub fn parse_molecule_file(text: &str, base: &PhysicalConstants) -> Result<MoleculeFile> {
    let doc: FileDocument = serde_json::from_str(text).map_err(json_error)?;
    let constants = doc.constants.apply(*base)?;
    let molecules = doc
        .molecules
        .into_iter()
        .map(|r| match r.de_unit {
            EnergyUnit::Ev => MoleculeRecord::from_ev(&r.name, r.de, r.re, r.mu, r.source),
            EnergyUnit::Wavenumber => {
                MoleculeRecord::from_wavenumber(&r.name, r.de, r.re, r.mu, r.source, &constants)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MoleculeFile {
        constants: doc.constants,
        molecules,
    })
}

pub fn load_molecule_file(path: &Path, base: &PhysicalConstants) -> Result<MoleculeFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_molecule_file(&text, base)
}

/// Records of a molecule file, converted under default constants plus the
/// file's own `constants` block.
pub fn load_molecules(path: &Path) -> Result<Vec<MoleculeRecord>> {
    Ok(load_molecule_file(path, &PhysicalConstants::default())?.molecules)
}

/// Writes records in the molecule-file format; cm⁻¹ records keep their original value.
pub fn to_molecule_json(records: &[MoleculeRecord], constants: &ConstantsOverride) -> String {
    let doc = FileDocument {
        constants: *constants,
        molecules: records
            .iter()
            .map(|r| FileRecord {
                name: r.name.clone(),
                de: r.de_wavenumber.unwrap_or(r.de),
                de_unit: if r.de_wavenumber.is_some() {
                    EnergyUnit::Wavenumber
                } else {
                    EnergyUnit::Ev
                },
                re: r.re,
                mu: r.mu,
                source: r.source,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("molecule records serialize")
}

/// Bisection for the root of a monotone `f` on `[lo, hi]` to relative `1e-15`.
fn bisect_root(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>, what: &str) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::CalibrationFailure(format!(
            "{what}: no root in [{lo:e}, {hi:e}] (residuals {f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * mid.abs() {
            return Ok(mid);
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `amu_c2` for which `record` in `state` has energy `reference_energy`.
pub fn calibrate_amu(
    record: &MoleculeRecord,
    reference_energy: f64,
    state: QuantumState,
    kind: PotentialKind,
    base: &PhysicalConstants,
) -> Result<f64> {
    let (lo, hi) = AMU_C2_RANGE;
    bisect_root(
        lo,
        hi,
        |amu| Ok(record.energy(kind, state, &base.with_amu_c2(amu))? - reference_energy),
        "amu_c2",
    )
}

/// The cm⁻¹ → eV factor for which a wavenumber-sourced `record` in `state`
/// has energy `reference_energy`, all other constants held at `base`.
pub fn calibrate_wavenumber_factor(
    record: &MoleculeRecord,
    reference_energy: f64,
    state: QuantumState,
    kind: PotentialKind,
    base: &PhysicalConstants,
) -> Result<f64> {
    if record.de_wavenumber.is_none() {
        return Err(Error::CalibrationFailure(format!(
            "{} has no wavenumber dissociation energy",
            record.name
        )));
    }
    let (lo, hi) = WAVENUMBER_FACTOR_RANGE;
    bisect_root(
        lo,
        hi,
        |f| Ok(record.energy(kind, state, &base.with_ev_per_wavenumber(f))? - reference_energy),
        "ev_per_wavenumber",
    )
}
