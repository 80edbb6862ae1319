//! Physical constants and the three unit conversions used throughout the crate.
//!
//! Internal units: energies in eV, lengths in Å, masses in amu.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// ℏc in eV·Å as printed in the reference tables.
pub const DEFAULT_HBAR_C: f64 = 1973.29;

/// Atomic mass unit rest energy in eV.
pub const DEFAULT_AMU_C2: f64 = 9.31494028e8;

/// Å per cm.
const ANGSTROM_PER_CM: f64 = 1.0e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ℏc in eV·Å.
    pub hbar_c: f64,
    /// Rest energy of one atomic mass unit in eV.
    pub amu_c2: f64,
    /// eV per cm⁻¹. When absent it follows from `hbar_c` as 2π·ℏc·10⁻⁸.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ev_per_wavenumber: Option<f64>,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar_c: DEFAULT_HBAR_C,
            amu_c2: DEFAULT_AMU_C2,
            ev_per_wavenumber: None,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar_c: f64, amu_c2: f64) -> Result<Self> {
        let c = Self {
            hbar_c,
            amu_c2,
            ev_per_wavenumber: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_amu_c2(mut self, amu_c2: f64) -> Self {
        self.amu_c2 = amu_c2;
        self
    }

    pub fn with_ev_per_wavenumber(mut self, factor: f64) -> Self {
        self.ev_per_wavenumber = Some(factor);
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("hbar_c", self.hbar_c)?;
        require_positive("amu_c2", self.amu_c2)?;
        if let Some(f) = self.ev_per_wavenumber {
            require_positive("ev_per_wavenumber", f)?;
        }
        Ok(())
    }

    /// Conversion factor from cm⁻¹ to eV in effect for these constants.
    pub fn wavenumber_factor(&self) -> f64 {
        self.ev_per_wavenumber
            .unwrap_or(2.0 * std::f64::consts::PI * self.hbar_c / ANGSTROM_PER_CM)
    }

    pub fn amu_to_energy(&self, mass: f64) -> Result<f64> {
        amu_to_energy(mass, self)
    }

    pub fn wavenumber_to_ev(&self, w: f64) -> Result<f64> {
        wavenumber_to_ev(w, self)
    }

    pub fn two_mu_over_hbar2(&self, mass: f64) -> Result<f64> {
        two_mu_over_hbar2(mass, self)
    }
}

/// Partial set of constants, as read from a constants or molecule file.
/// Present fields replace the corresponding field of a base set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amu_c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ev_per_wavenumber: Option<f64>,
}

impl ConstantsOverride {
    pub fn is_empty(&self) -> bool {
        self.hbar_c.is_none() && self.amu_c2.is_none() && self.ev_per_wavenumber.is_none()
    }

    pub fn apply(&self, base: PhysicalConstants) -> Result<PhysicalConstants> {
        let merged = PhysicalConstants {
            hbar_c: self.hbar_c.unwrap_or(base.hbar_c),
            amu_c2: self.amu_c2.unwrap_or(base.amu_c2),
            ev_per_wavenumber: self.ev_per_wavenumber.or(base.ev_per_wavenumber),
        };
        merged.validate()?;
        Ok(merged)
    }

    /// Reads a JSON object with any of `hbar_c`, `amu_c2`, `ev_per_wavenumber`.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Rest energy of `mass` (amu) in eV.
pub fn amu_to_energy(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("mass", mass)?;
    Ok(mass * constants.amu_c2)
}

/// Converts a wavenumber in cm⁻¹ to eV.
pub fn wavenumber_to_ev(w: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(Error::Domain {
            name: "wavenumber",
            value: w,
            reason: "must be non-negative and finite",
        });
    }
    Ok(w * constants.wavenumber_factor())
}

/// The recurring 2μ/ℏ² factor, in 1/(eV·Å²).
pub fn two_mu_over_hbar2(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    let mc2 = amu_to_energy(mass, constants)?;
    Ok(2.0 * mc2 / (constants.hbar_c * constants.hbar_c))
}
