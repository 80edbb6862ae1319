//! Kratzer-family potentials in the normal form `V(r) = A/r² − B/r + C`, the
//! effective potential of the reduced hyperradial equation and its turning points.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::units::PhysicalConstants;

/// Coefficients of `V(r) = A/r² − B/r + C` (eV·Å², eV·Å, eV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PotentialSpec {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain {
                name: "A",
                value: a,
                reason: "must be non-negative and finite",
            });
        }
        require_positive("B", b)?;
        if !c.is_finite() {
            return Err(Error::Domain {
                name: "C",
                value: c,
                reason: "must be finite",
            });
        }
        Ok(Self { a, b, c })
    }

    /// `V(r) = −De(2re/r − re²/r²)`.
    pub fn from_kratzer(de: f64, re: f64) -> Result<Self> {
        require_positive("De", de)?;
        require_positive("re", re)?;
        Ok(Self {
            a: de * re * re,
            b: 2.0 * de * re,
            c: 0.0,
        })
    }

    /// `V(r) = De((r − re)/r)²`, the Kratzer potential shifted up by `De`.
    pub fn from_modified_kratzer(de: f64, re: f64) -> Result<Self> {
        let mut spec = Self::from_kratzer(de, re)?;
        spec.c = de;
        Ok(spec)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.a / (r * r) - self.b / r + self.c
    }
}

/// Node count `n`, angular momentum `l` and spatial dimension `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
    pub d: u32,
}

impl QuantumState {
    pub fn new(n: u32, l: u32, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain {
                name: "D",
                value: d as f64,
                reason: "spatial dimension must be at least 2",
            });
        }
        Ok(Self { n, l, d })
    }

    /// `M = D + 2l`; the spectrum depends on `(l, D)` only through it.
    pub fn m(&self) -> u32 {
        self.d + 2 * self.l
    }
}

impl std::fmt::Display for QuantumState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, l={}, D={})", self.n, self.l, self.d)
    }
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain {
            name: "M",
            value: m as f64,
            reason: "M = D + 2l must be at least 2",
        });
    }
    Ok(())
}

/// A potential together with the reduced mass and constants that turn it into
/// a concrete radial eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSystem {
    pub spec: PotentialSpec,
    /// Reduced mass in amu.
    pub mass: f64,
    pub constants: PhysicalConstants,
    two_mu: f64,
}

impl RadialSystem {
    pub fn new(spec: PotentialSpec, mass: f64, constants: PhysicalConstants) -> Result<Self> {
        constants.validate()?;
        let spec = PotentialSpec::new(spec.a, spec.b, spec.c)?;
        let two_mu = constants.two_mu_over_hbar2(mass)?;
        Ok(Self {
            spec,
            mass,
            constants,
            two_mu,
        })
    }

    /// 2μ/ℏ² in 1/(eV·Å²).
    pub fn two_mu_over_hbar2(&self) -> f64 {
        self.two_mu
    }

    /// `Λ(Λ+1) = 2μA/ℏ² + ((M−2)² − 1)/4`, the dimensionless centrifugal strength.
    pub fn centrifugal_strength(&self, m: u32) -> Result<f64> {
        check_m(m)?;
        let k = (m as f64) - 2.0;
        Ok(self.two_mu * self.spec.a + (k * k - 1.0) / 4.0)
    }

    /// `Λ = (−1 + √((M−2)² + 8μA/ℏ²))/2`.
    pub fn lambda(&self, m: u32) -> Result<f64> {
        check_m(m)?;
        let k = (m as f64) - 2.0;
        Ok(0.5 * (-1.0 + (k * k + 4.0 * self.two_mu * self.spec.a).sqrt()))
    }

    pub fn effective_potential(&self, m: u32, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        let strength = self.centrifugal_strength(m)?;
        Ok(strength / (self.two_mu * r * r) - self.spec.b / r + self.spec.c)
    }

    /// Location and value of the minimum of `V_eff`, or `None` when the
    /// centrifugal term is not repulsive and `V_eff` is unbounded below.
    pub fn effective_minimum(&self, m: u32) -> Result<Option<(f64, f64)>> {
        let strength = self.centrifugal_strength(m)?;
        if strength <= 0.0 {
            return Ok(None);
        }
        let r_min = 2.0 * strength / (self.two_mu * self.spec.b);
        let v_min = self.spec.c - self.spec.b * self.spec.b * self.two_mu / (4.0 * strength);
        Ok(Some((r_min, v_min)))
    }

    /// Lower edge of the bound-state window: the minimum of `V_eff`, or −∞.
    pub fn window_floor(&self, m: u32) -> Result<f64> {
        Ok(self
            .effective_minimum(m)?
            .map_or(f64::NEG_INFINITY, |(_, v)| v))
    }

    /// Classical turning points `r_a ≤ r_b` where `V_eff(r) = E`.
    pub fn turning_points(&self, m: u32, energy: f64) -> Result<(f64, f64)> {
        let strength = self.centrifugal_strength(m)?;
        if !energy.is_finite() {
            return Err(Error::Domain {
                name: "E",
                value: energy,
                reason: "must be finite",
            });
        }
        let depth = self.spec.c - energy;
        if !(depth > 0.0) {
            return Err(Error::NoBoundState {
                energy,
                asymptote: self.spec.c,
            });
        }
        if strength < 0.0 {
            return Err(Error::Domain {
                name: "Lambda(Lambda+1)",
                value: strength,
                reason: "attractive centrifugal term has no inner turning point",
            });
        }
        // depth·r² − B·r + strength/(2μ/ℏ²) = 0
        let b = self.spec.b;
        let q = strength / self.two_mu;
        let disc = b * b - 4.0 * depth * q;
        let disc = if disc < 0.0 {
            if disc > -1e-12 * b * b {
                0.0
            } else {
                return Err(Error::NoClassicalRegion {
                    energy,
                    minimum: self.window_floor(m)?,
                });
            }
        } else {
            disc
        };
        let r_b = (b + disc.sqrt()) / (2.0 * depth);
        let r_a = q / (depth * r_b);
        Ok((r_a, r_b))
    }
}
