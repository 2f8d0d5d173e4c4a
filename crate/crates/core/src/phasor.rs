//! Phasor values, PMU samples and per-unit bases.
//!
//! AC quantities are carried in per-unit on `s_base`/`v_ac_base`. The DC
//! converter equations work in kV, kA, MW and ohms, so conversion happens
//! at the boundary with [`pu_to_physical`] and [`physical_to_pu`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular phasor. Polar form is derived on demand via `norm`/`arg`.
pub type ComplexPhasor = num_complex::Complex64;

/// One positive-sequence synchrophasor sample at a converter terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct PmuSample {
    /// Seconds since the start of the trajectory.
    pub t: f64,
    /// Terminal bus voltage, per-unit.
    pub v: ComplexPhasor,
    /// Current flowing from the AC system into the converter bus, per-unit.
    pub i: ComplexPhasor,
    pub terminal_id: String,
}

impl PmuSample {
    pub fn new(t: f64, v: ComplexPhasor, i: ComplexPhasor, terminal_id: impl Into<String>) -> Self {
        PmuSample {
            t,
            v,
            i,
            terminal_id: terminal_id.into(),
        }
    }
}

/// Voltage and current change between two consecutive samples, `b - a`.
pub fn delta(a: &PmuSample, b: &PmuSample) -> Result<(ComplexPhasor, ComplexPhasor)> {
    if a.terminal_id != b.terminal_id {
        return Err(Error::TerminalMismatch(
            a.terminal_id.clone(),
            b.terminal_id.clone(),
        ));
    }
    Ok((b.v - a.v, b.i - a.i))
}

/// System bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerUnitBase {
    /// MVA.
    pub s_base: f64,
    /// AC line-to-line voltage base, kV.
    pub v_ac_base: f64,
    /// Nominal DC voltage, kV.
    pub v_dc_nom: f64,
    /// Nominal DC current, kA.
    pub i_dc_nom: f64,
    /// Hz.
    pub f: f64,
}

impl Default for PerUnitBase {
    fn default() -> Self {
        PerUnitBase {
            s_base: 1000.0,
            v_ac_base: 345.0,
            v_dc_nom: 500.0,
            i_dc_nom: 2.0,
            f: 50.0,
        }
    }
}

impl PerUnitBase {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("s_base", self.s_base),
            ("v_ac_base", self.v_ac_base),
            ("v_dc_nom", self.v_dc_nom),
            ("i_dc_nom", self.i_dc_nom),
            ("f", self.f),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        Ok(())
    }

    fn scale(&self, kind: Quantity) -> f64 {
        match kind {
            Quantity::AcVoltage => self.v_ac_base,
            Quantity::DcVoltage => self.v_dc_nom,
            Quantity::DcCurrent => self.i_dc_nom,
            Quantity::Power => self.s_base,
        }
    }
}

/// What a per-unit number measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    AcVoltage,
    DcVoltage,
    DcCurrent,
    Power,
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ac_voltage" => Ok(Quantity::AcVoltage),
            "dc_voltage" => Ok(Quantity::DcVoltage),
            "dc_current" => Ok(Quantity::DcCurrent),
            "power" => Ok(Quantity::Power),
            other => Err(Error::invalid(
                "kind",
                format!("unknown quantity `{other}`"),
            )),
        }
    }
}

pub fn pu_to_physical(x: f64, base: &PerUnitBase, kind: Quantity) -> Result<f64> {
    base.validate()?;
    Ok(x * base.scale(kind))
}

pub fn physical_to_pu(x: f64, base: &PerUnitBase, kind: Quantity) -> Result<f64> {
    base.validate()?;
    Ok(x / base.scale(kind))
}
