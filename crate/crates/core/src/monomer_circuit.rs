//! Per-monomer R, L, C of an actin filament and their aggregation into an
//! effective filament circuit.
//!
//! Every monomer is a series RLC cell. The counterion depletion shell of
//! roughly one Bjerrum length around the filament forms the capacitor, the
//! helical charge path forms the inductor, and the ionic conductivity of the
//! shell sets the resistance. A filament of `n` monomers sums `n` cells:
//! resistances and inductances in series, capacitances additively.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{finite, require, ModelError, Result};

pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// Effective per-micrometre values quoted for a 1 µm filament.
pub const PAPER_R_PER_UM: f64 = 1.2e9;
pub const PAPER_L_PER_UM: f64 = 340e-12;
pub const PAPER_C_PER_UM: f64 = 0.02e-12;

/// Monomers per micrometre that reproduce the quoted effective values.
pub const DEFAULT_N_EFF_PER_UM: f64 = 200.0;
/// Monomer density measured for actin filaments.
pub const MEASURED_MONOMERS_PER_UM: f64 = 370.0;

/// Geometry and electrical constants of an actin monomer in solution.
///
/// The defaults for radius, permittivity, resistivity and helical turns are
/// fitted so that the three per-monomer closed forms land on the quoted
/// values (96e-6 pF, 1.7 pH, 6.11 MΩ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    #[serde(rename = "r_actin_m")]
    pub r_actin: f64,
    #[serde(rename = "lambda_B_m")]
    pub lambda_b: f64,
    pub epsilon_r: f64,
    pub mu_r: f64,
    #[serde(rename = "rho_ohm_m")]
    pub rho: f64,
    #[serde(rename = "l_monomer_m")]
    pub l_monomer: f64,
    #[serde(rename = "H_turns")]
    pub h_turns: f64,
    /// Temperature at which `lambda_b` was measured. Not used in any formula.
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            r_actin: 2.5e-9,
            lambda_b: 7.13e-10,
            epsilon_r: 80.0,
            mu_r: 1.0,
            rho: 0.826,
            l_monomer: 5.4e-9,
            h_turns: 15.0,
            temperature_k: 293.0,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        require("r_actin_m", self.r_actin, self.r_actin > 0.0, "> 0")?;
        require("lambda_B_m", self.lambda_b, self.lambda_b > 0.0, "> 0")?;
        require("epsilon_r", self.epsilon_r, self.epsilon_r >= 1.0, ">= 1")?;
        require("mu_r", self.mu_r, self.mu_r > 0.0, "> 0")?;
        require("rho_ohm_m", self.rho, self.rho > 0.0, "> 0")?;
        require("l_monomer_m", self.l_monomer, self.l_monomer > 0.0, "> 0")?;
        require("H_turns", self.h_turns, self.h_turns >= 1.0, ">= 1")?;
        require(
            "temperature_K",
            self.temperature_k,
            self.temperature_k > 0.0,
            "> 0",
        )?;
        Ok(())
    }

    /// ln((r + λ_B) / r), the log-ratio of the depletion shell radii.
    fn shell_log_ratio(&self) -> f64 {
        (self.lambda_b / self.r_actin).ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomerRlc {
    pub c0: f64,
    pub l0: f64,
    pub r0: f64,
}

/// Capacitance of one monomer's depletion shell, in farads.
pub fn monomer_capacitance(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    let eps = p.epsilon_r * VACUUM_PERMITTIVITY;
    finite("C0", 2.0 * PI * eps * p.l_monomer / p.shell_log_ratio())
}

/// Inductance of one monomer, `μ H² A / l` with `A = π (r + λ_B)²`.
pub fn monomer_inductance(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    let mu = p.mu_r * VACUUM_PERMEABILITY;
    let outer = p.r_actin + p.lambda_b;
    let area = PI * outer * outer;
    finite("L0", mu * p.h_turns * p.h_turns * area / p.l_monomer)
}

/// Ionic resistance of one monomer, in ohms.
pub fn monomer_resistance(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    finite("R0", p.rho * p.shell_log_ratio() / (2.0 * PI * p.l_monomer))
}

pub fn monomer_rlc(p: &PhysicalParams) -> Result<MonomerRlc> {
    Ok(MonomerRlc {
        c0: monomer_capacitance(p)?,
        l0: monomer_inductance(p)?,
        r0: monomer_resistance(p)?,
    })
}

/// Where the effective filament components come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitMode {
    /// Quoted per-µm values scaled by length; physical parameters ignored.
    #[default]
    Paper,
    /// Per-monomer values times `n_eff_per_um * length`.
    Derived,
}

impl std::str::FromStr for CircuitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Self::Paper),
            "derived" => Ok(Self::Derived),
            other => Err(format!(
                "unknown circuit mode `{other}` (expected paper|derived)"
            )),
        }
    }
}

impl std::fmt::Display for CircuitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::Derived => "derived",
        })
    }
}

/// Effective series RLC of a whole filament.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilamentCircuit {
    pub length_um: f64,
    pub r_eq: f64,
    pub l_eq: f64,
    pub c_eq: f64,
    pub source: CircuitMode,
}

impl FilamentCircuit {
    /// Builds a circuit from explicit components, checking positivity and
    /// the overdamped condition.
    pub fn new(
        length_um: f64,
        r_eq: f64,
        l_eq: f64,
        c_eq: f64,
        source: CircuitMode,
    ) -> Result<Self> {
        require("length_um", length_um, length_um > 0.0, "> 0")?;
        require("R_eq", r_eq, r_eq > 0.0, "> 0")?;
        require("L_eq", l_eq, l_eq > 0.0, "> 0")?;
        require("C_eq", c_eq, c_eq > 0.0, "> 0")?;
        let circuit = Self {
            length_um,
            r_eq,
            l_eq,
            c_eq,
            source,
        };
        circuit.check_overdamped()?;
        Ok(circuit)
    }

    /// `(R/2L)²` and `1/(LC)`.
    pub fn damping_terms(&self) -> (f64, f64) {
        let half = self.r_eq / (2.0 * self.l_eq);
        (half * half, 1.0 / (self.l_eq * self.c_eq))
    }

    /// `(R/2L)² · LC`; exceeds 1 exactly when the circuit is overdamped.
    pub fn overdamping_ratio(&self) -> f64 {
        let half = self.r_eq / (2.0 * self.l_eq);
        half * half * self.l_eq * self.c_eq
    }

    pub fn check_overdamped(&self) -> Result<()> {
        let (damping_sq, natural_sq) = self.damping_terms();
        if self.overdamping_ratio() > 1.0 && damping_sq.is_finite() {
            Ok(())
        } else {
            Err(ModelError::NotOverdamped {
                damping_sq,
                natural_sq,
            })
        }
    }
}

/// Effective circuit for a filament of `length_um` micrometres.
pub fn build_filament(
    p: &PhysicalParams,
    length_um: f64,
    mode: CircuitMode,
    n_eff_per_um: f64,
) -> Result<FilamentCircuit> {
    require("length_um", length_um, length_um > 0.0, "> 0")?;
    require("n_eff_per_um", n_eff_per_um, n_eff_per_um > 0.0, "> 0")?;
    match mode {
        CircuitMode::Paper => FilamentCircuit::new(
            length_um,
            PAPER_R_PER_UM * length_um,
            PAPER_L_PER_UM * length_um,
            PAPER_C_PER_UM * length_um,
            mode,
        ),
        CircuitMode::Derived => {
            let m = monomer_rlc(p)?;
            let n = n_eff_per_um * length_um;
            FilamentCircuit::new(length_um, n * m.r0, n * m.l0, n * m.c0, mode)
        }
    }
}
