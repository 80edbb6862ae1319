//! Published energy tables shipped as CSV, and their recomputation.
//!
//! Each table lists EQR energies and, for some tables, values from other
//! methods (AIM, NU) kept as comparison data. Recomputation runs under either
//! the default constants or constants calibrated on fixed anchor entries.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molecules::{
    builtin_registry_with, calibrate_amu, calibrate_wavenumber_factor, lookup, MoleculeRecord,
    PotentialKind, Source,
};
use crate::potential::QuantumState;
use crate::units::PhysicalConstants;

const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");
const TABLE4: &str = include_str!("../data/table4.csv");
const TABLE5: &str = include_str!("../data/table5.csv");
const TABLE7: &str = include_str!("../data/table7.csv");
const TABLE8: &str = include_str!("../data/table8.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    T2,
    T3,
    T4,
    T5,
    T7,
    T8,
}

impl TableId {
    pub const ALL: [TableId; 6] = [Self::T2, Self::T3, Self::T4, Self::T5, Self::T7, Self::T8];

    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Self::T2),
            3 => Ok(Self::T3),
            4 => Ok(Self::T4),
            5 => Ok(Self::T5),
            7 => Ok(Self::T7),
            8 => Ok(Self::T8),
            _ => Err(Error::Domain {
                name: "table",
                value: n as f64,
                reason: "available tables are 2, 3, 4, 5, 7 and 8",
            }),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Self::T2 => 2,
            Self::T3 => 3,
            Self::T4 => 4,
            Self::T5 => 5,
            Self::T7 => 7,
            Self::T8 => 8,
        }
    }

    pub fn potential(self) -> PotentialKind {
        match self {
            Self::T7 | Self::T8 => PotentialKind::Modified,
            _ => PotentialKind::Kratzer,
        }
    }

    /// Registry table the molecular constants come from.
    pub fn source(self) -> Source {
        match self.potential() {
            PotentialKind::Kratzer => Source::Table1,
            PotentialKind::Modified => Source::Table6,
        }
    }

    fn csv(self) -> &'static str {
        match self {
            Self::T2 => TABLE2,
            Self::T3 => TABLE3,
            Self::T4 => TABLE4,
            Self::T5 => TABLE5,
            Self::T7 => TABLE7,
            Self::T8 => TABLE8,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Table {}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "EQR")]
    Eqr,
    #[serde(rename = "AIM")]
    Aim,
    #[serde(rename = "NU")]
    Nu,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Eqr => "EQR",
            Method::Aim => "AIM",
            Method::Nu => "NU",
        })
    }
}

/// One printed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub molecule: String,
    pub method: Method,
    pub dim: u32,
    pub n: u32,
    pub l: u32,
    /// The value as printed.
    pub raw: String,
    /// Parsed value, after repairing a dropped decimal point.
    pub value: f64,
    pub malformed: bool,
}

/// Parses a printed number. A string of digits with a leading zero and no
/// decimal point is read as `0.<rest>`, the only repair needed in the data.
pub fn parse_printed(raw: &str) -> Result<(f64, bool)> {
    let bad = |message: String| Error::Parse { line: 0, message };
    let body = raw.strip_prefix('-').unwrap_or(raw);
    if !body.contains('.') && body.len() > 1 && body.starts_with('0') && body.bytes().all(|b| b.is_ascii_digit()) {
        let sign = if raw.starts_with('-') { "-" } else { "" };
        let fixed = format!("{sign}0.{}", &body[1..]);
        let v = fixed.parse::<f64>().map_err(|e| bad(format!("{raw}: {e}")))?;
        return Ok((v, true));
    }
    let v = raw.parse::<f64>().map_err(|e| bad(format!("{raw}: {e}")))?;
    Ok((v, false))
}

pub fn reference_entries(table: TableId) -> Result<Vec<ReferenceEntry>> {
    let mut out = Vec::new();
    for (i, line) in table.csv().lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let method = match fields[1] {
            "EQR" => Method::Eqr,
            "AIM" => Method::Aim,
            "NU" => Method::Nu,
            other => return Err(err(format!("unknown method {other}"))),
        };
        let int = |s: &str| s.parse::<u32>().map_err(|e| err(format!("{s}: {e}")));
        let (value, malformed) = parse_printed(fields[5]).map_err(|e| err(e.to_string()))?;
        out.push(ReferenceEntry {
            molecule: fields[0].to_string(),
            method,
            dim: int(fields[2])?,
            n: int(fields[3])?,
            l: int(fields[4])?,
            raw: fields[5].to_string(),
            value,
            malformed,
        });
    }
    Ok(out)
}

/// An entry used to pin a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub table: u32,
    pub molecule: String,
    pub state: QuantumState,
    pub reference: f64,
    /// Name of the constant fixed by this entry.
    pub constant: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constants: PhysicalConstants,
    pub anchors: Vec<Anchor>,
}

fn anchor_entry(table: TableId, molecule: &str) -> Result<ReferenceEntry> {
    reference_entries(table)?
        .into_iter()
        .find(|e| e.molecule == molecule && e.method == Method::Eqr && e.n == 0 && e.l == 0 && e.dim == 3)
        .ok_or_else(|| Error::CalibrationFailure(format!("anchor {molecule} missing from {table}")))
}

/// Pins `amu_c2` on the LiH ground state of Table 2, then the cm⁻¹ → eV
/// factor on the N2 ground state of Table 7.
pub fn calibrate(base: &PhysicalConstants) -> Result<Calibration> {
    let ground = QuantumState::new(0, 0, 3)?;
    let mut anchors = Vec::new();

    let registry = builtin_registry_with(base);
    let lih_entry = anchor_entry(TableId::T2, "LiH")?;
    let lih = lookup(&registry, "LiH", PotentialKind::Kratzer, Some(Source::Table1))
        .ok_or_else(|| Error::CalibrationFailure("LiH missing from registry".into()))?;
    let amu = calibrate_amu(lih, lih_entry.value, ground, PotentialKind::Kratzer, base)?;
    let constants = base.with_amu_c2(amu);
    anchors.push(Anchor {
        table: 2,
        molecule: "LiH".into(),
        state: ground,
        reference: lih_entry.value,
        constant: "amu_c2".into(),
        value: amu,
    });

    let n2_entry = anchor_entry(TableId::T7, "N2")?;
    let n2 = lookup(&registry, "N2", PotentialKind::Modified, Some(Source::Table6))
        .ok_or_else(|| Error::CalibrationFailure("N2 missing from registry".into()))?;
    let factor = calibrate_wavenumber_factor(n2, n2_entry.value, ground, PotentialKind::Modified, &constants)?;
    anchors.push(Anchor {
        table: 7,
        molecule: "N2".into(),
        state: ground,
        reference: n2_entry.value,
        constant: "ev_per_wavenumber".into(),
        value: factor,
    });
    Ok(Calibration {
        constants: constants.with_ev_per_wavenumber(factor),
        anchors,
    })
}

/// A recomputed EQR entry with any comparison value for the same state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub molecule: String,
    pub dim: u32,
    pub n: u32,
    pub l: u32,
    pub printed: String,
    pub reference: f64,
    pub computed: f64,
    pub relative_deviation: f64,
    pub malformed: bool,
    pub comparison: Option<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub method: Method,
    pub printed: String,
    pub value: f64,
    /// `|computed − value|`, eV
    pub absolute_deviation: f64,
}

/// A `(D = 2, l + 1)` row and its `(D = 4, l)` partner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyPair {
    pub molecule: String,
    pub n: u32,
    /// `l` of the D = 4 entry.
    pub l: u32,
    pub printed_d2: String,
    pub printed_d4: String,
    pub printed_equal: bool,
    pub computed_bit_identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: u32,
    pub potential: PotentialKind,
    pub calibrated: bool,
    pub constants: PhysicalConstants,
    pub anchors: Vec<Anchor>,
    pub rows: Vec<TableRow>,
    pub max_relative_deviation: f64,
    pub max_comparison_deviation: Option<f64>,
    pub degeneracy: Vec<DegeneracyPair>,
}

impl TableReport {
    pub fn malformed(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| r.malformed)
    }
}

/// Recomputes every entry of `table`. With `calibrate`, the constants from
/// [`calibrate`] replace `base`.
pub fn reproduce_table(table: TableId, base: &PhysicalConstants, calibrate_first: bool) -> Result<TableReport> {
    let (constants, anchors) = if calibrate_first {
        let c = calibrate(base)?;
        (c.constants, c.anchors)
    } else {
        (*base, Vec::new())
    };
    let kind = table.potential();
    let registry = builtin_registry_with(&constants);
    let entries = reference_entries(table)?;

    let mut comparisons: HashMap<(String, u32, u32, u32), &ReferenceEntry> = HashMap::new();
    for e in entries.iter().filter(|e| e.method != Method::Eqr) {
        comparisons.insert((e.molecule.clone(), e.dim, e.n, e.l), e);
    }

    let mut records: HashMap<String, MoleculeRecord> = HashMap::new();
    let mut rows = Vec::new();
    let mut computed_by_state: HashMap<(String, u32, u32, u32), f64> = HashMap::new();
    for e in entries.iter().filter(|e| e.method == Method::Eqr) {
        if !records.contains_key(&e.molecule) {
            let r = lookup(&registry, &e.molecule, kind, Some(table.source())).ok_or_else(|| {
                Error::Validation {
                    field: "molecule".into(),
                    line: 0,
                    message: format!("{} not in the built-in registry", e.molecule),
                }
            })?;
            records.insert(e.molecule.clone(), r.clone());
        }
        let state = QuantumState::new(e.n, e.l, e.dim)?;
        let computed = records[&e.molecule].energy(kind, state, &constants)?;
        let key = (e.molecule.clone(), e.dim, e.n, e.l);
        computed_by_state.insert(key.clone(), computed);
        let comparison = comparisons.get(&key).map(|c| Comparison {
            method: c.method,
            printed: c.raw.clone(),
            value: c.value,
            absolute_deviation: (computed - c.value).abs(),
        });
        rows.push(TableRow {
            molecule: e.molecule.clone(),
            dim: e.dim,
            n: e.n,
            l: e.l,
            printed: e.raw.clone(),
            reference: e.value,
            computed,
            relative_deviation: ((computed - e.value) / e.value).abs(),
            malformed: e.malformed,
            comparison,
        });
    }

    let mut degeneracy = Vec::new();
    for r4 in rows.iter().filter(|r| r.dim == 4) {
        let partner = rows
            .iter()
            .find(|r| r.dim == 2 && r.molecule == r4.molecule && r.n == r4.n && r.l == r4.l + 1);
        if let Some(r2) = partner {
            degeneracy.push(DegeneracyPair {
                molecule: r4.molecule.clone(),
                n: r4.n,
                l: r4.l,
                printed_d2: r2.printed.clone(),
                printed_d4: r4.printed.clone(),
                printed_equal: r2.printed == r4.printed,
                computed_bit_identical: r2.computed.to_bits() == r4.computed.to_bits(),
            });
        }
    }

    let max_relative_deviation = rows.iter().map(|r| r.relative_deviation).fold(0.0, f64::max);
    let max_comparison_deviation = rows
        .iter()
        .filter_map(|r| r.comparison.as_ref().map(|c| c.absolute_deviation))
        .reduce(f64::max);
    Ok(TableReport {
        table: table.number(),
        potential: kind,
        calibrated: calibrate_first,
        constants,
        anchors,
        rows,
        max_relative_deviation,
        max_comparison_deviation,
        degeneracy,
    })
}
