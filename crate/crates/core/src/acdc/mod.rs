//! Steady-state AC/DC model of a two-terminal LCC link between two
//! Thevenin sources.
//!
//! AC quantities are per-unit; converter equations run in kV, kA, MW,
//! Mvar and ohms, with angles in radians.

mod ac;
mod converter;
mod limits;
mod power_flow;

use serde::{Deserialize, Serialize};

pub use ac::{ac_voltage_solve, compensator_q};
pub use converter::{
    commutation_resistance, converter_pq, dc_line_solve, ideal_no_load_voltage, DcLineSolution,
};
pub use limits::{
    classify_control_mode, converter_rating_limit, vdcol_limit, ControlMode, ModeTolerance,
};
pub use power_flow::{
    acdc_fixed_point, resubstitute, solve_rectifier_tap, FixedPointOptions, FixedPointSolution,
};

use crate::error::{Error, Result};
use crate::phasor::{ComplexPhasor, PerUnitBase};

/// Converter end of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Rectifier,
    Inverter,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Rectifier => "rectifier",
            Side::Inverter => "inverter",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectifier" => Ok(Side::Rectifier),
            "inverter" => Ok(Side::Inverter),
            other => Err(Error::invalid("side", format!("unknown side `{other}`"))),
        }
    }
}

/// Voltage-dependent current order limit, all values per-unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VdcolCurve {
    pub v1: f64,
    pub v2: f64,
    pub i1: f64,
    pub i2: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for VdcolCurve {
    fn default() -> Self {
        VdcolCurve {
            v1: 0.4,
            v2: 0.9,
            i1: 0.55,
            i2: 1.0,
            k1: 0.9,
            k2: 1.0,
        }
    }
}

impl VdcolCurve {
    pub fn validate(&self) -> Result<()> {
        if !(self.v1 < self.v2) {
            return Err(Error::invalid("vdcol.v1", "must be below v2"));
        }
        if !(self.i1 < self.i2) {
            return Err(Error::invalid("vdcol.i1", "must be below i2"));
        }
        if self.k1 < 0.0 || self.k2 < 0.0 {
            return Err(Error::invalid("vdcol.k1", "slopes must be non-negative"));
        }
        Ok(())
    }

    /// Jump of the middle segment at `v2`; zero for a continuous curve.
    pub fn discontinuity(&self) -> f64 {
        self.i1 + self.k1 * (self.v2 - self.v1) - self.i2
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuity().abs() <= 1e-9
    }
}

/// Converter constants and operating limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HvdcConfig {
    /// Six-pulse bridges in series per converter.
    pub b_r: f64,
    pub b_i: f64,
    /// Converter transformer ratios.
    pub n_r: f64,
    pub n_i: f64,
    /// Commutation reactances, ohm.
    pub x_dr: f64,
    pub x_di: f64,
    /// DC line resistance, ohm.
    pub r_d: f64,
    pub alpha_min_deg: f64,
    pub gamma_min_deg: f64,
    /// AC terminal voltage limits, p.u.
    pub e_min: f64,
    pub e_max: f64,
    /// Current margin between rectifier and inverter orders, p.u. of I_dN.
    pub i_margin: f64,
    pub vdcol: VdcolCurve,
    /// Short-time and continuous overload multipliers of I_dN.
    pub i_ra_short: f64,
    pub i_ra_long: f64,
    /// Duration of the short-time overload, s.
    pub i_ra_window: f64,
    /// Filter and capacitor bank output at 1.0 p.u. voltage, Mvar.
    pub q_acr_rated: f64,
    pub q_aci_rated: f64,
    pub base: PerUnitBase,
}

impl Default for HvdcConfig {
    fn default() -> Self {
        HvdcConfig {
            b_r: 2.0,
            b_i: 2.0,
            n_r: 0.5738,
            n_i: 0.5718,
            x_dr: 8.3201,
            x_di: 7.1949,
            r_d: 5.79,
            alpha_min_deg: 5.0,
            gamma_min_deg: 17.0,
            e_min: 0.9,
            e_max: f64::INFINITY,
            i_margin: 0.1,
            vdcol: VdcolCurve::default(),
            i_ra_short: 1.3,
            i_ra_long: 1.1,
            i_ra_window: 3.0,
            q_acr_rated: 300.0,
            q_aci_rated: 300.0,
            base: PerUnitBase::default(),
        }
    }
}

impl HvdcConfig {
    pub fn alpha_min(&self) -> f64 {
        self.alpha_min_deg.to_radians()
    }

    pub fn gamma_min(&self) -> f64 {
        self.gamma_min_deg.to_radians()
    }

    /// Rated DC current, kA.
    pub fn i_dn(&self) -> f64 {
        self.base.i_dc_nom
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.vdcol.validate()?;
        let positive = [
            ("b_r", self.b_r),
            ("b_i", self.b_i),
            ("n_r", self.n_r),
            ("n_i", self.n_i),
            ("x_dr", self.x_dr),
            ("x_di", self.x_di),
            ("r_d", self.r_d),
            ("gamma_min_deg", self.gamma_min_deg),
            ("i_ra_short", self.i_ra_short),
            ("i_ra_long", self.i_ra_long),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.alpha_min_deg >= 0.0 && self.alpha_min_deg < 90.0) {
            return Err(Error::invalid("alpha_min_deg", "must lie in [0, 90)"));
        }
        if !(self.e_min < self.e_max) {
            return Err(Error::invalid("e_min", "must be below e_max"));
        }
        if self.q_acr_rated < 0.0 || self.q_aci_rated < 0.0 {
            return Err(Error::invalid(
                "q_acr_rated",
                "compensation must be non-negative",
            ));
        }
        if self.i_margin < 0.0 || self.i_ra_window < 0.0 {
            return Err(Error::invalid("i_margin", "must be non-negative"));
        }
        Ok(())
    }
}

/// Thevenin source behind one converter bus, per-unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcSide {
    pub e_th: ComplexPhasor,
    pub x_th: f64,
    #[serde(default)]
    pub r_th: f64,
}

impl AcSide {
    pub fn new(e_mag: f64, x_th: f64) -> Self {
        AcSide {
            e_th: ComplexPhasor::new(e_mag, 0.0),
            x_th,
            r_th: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_th > 0.0 && self.x_th.is_finite()) {
            return Err(Error::invalid("x_th", "must be positive"));
        }
        if !self.e_th.norm().is_finite() {
            return Err(Error::invalid("e_th", "must be finite"));
        }
        Ok(())
    }
}

/// Converged steady state of the link at one DC current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcOperatingPoint {
    /// kA.
    pub i_d: f64,
    /// kV.
    pub v_dr: f64,
    pub v_di: f64,
    /// rad.
    pub alpha: f64,
    pub gamma: f64,
    /// MW.
    pub p_dr: f64,
    pub p_di: f64,
    /// Mvar absorbed by each converter.
    pub q_dr: f64,
    pub q_di: f64,
    /// AC bus voltages, kV.
    pub e_dr: f64,
    pub e_di: f64,
    /// Power factor angles, rad.
    pub phi_r: f64,
    pub phi_i: f64,
}

impl DcOperatingPoint {
    pub fn power(&self, side: Side) -> f64 {
        match side {
            Side::Rectifier => self.p_dr,
            Side::Inverter => self.p_di,
        }
    }

    /// DC voltage at the middle of the line, kV.
    pub fn v_mid(&self) -> f64 {
        0.5 * (self.v_dr + self.v_di)
    }
}
