//! Six-pulse bridge converter equations.

use std::f64::consts::PI;

use super::HvdcConfig;
use crate::error::{Error, Result};

/// Ideal no-load DC voltage `1.35 B N E`, kV for `e_d` in kV.
pub fn ideal_no_load_voltage(b: f64, n: f64, e_d: f64) -> f64 {
    1.35 * b * n * e_d
}

/// Equivalent commutation resistance `(3/pi) B X`, ohm.
pub fn commutation_resistance(b: f64, x: f64) -> f64 {
    3.0 / PI * b * x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcLineSolution {
    /// kV.
    pub v_dr: f64,
    pub v_di: f64,
    /// rad.
    pub alpha: f64,
    pub cos_alpha: f64,
    /// No-load voltages, kV.
    pub v_dor: f64,
    pub v_doi: f64,
}

/// DC voltages and firing angle with the inverter held at extinction angle
/// `gamma`. AC voltages in kV, current in kA.
pub fn dc_line_solve(
    cfg: &HvdcConfig,
    e_dr: f64,
    e_di: f64,
    i_d: f64,
    gamma: f64,
) -> Result<DcLineSolution> {
    if i_d < 0.0 {
        return Err(Error::invalid("i_d", "must be non-negative"));
    }
    let LineVoltages {
        v_dr,
        v_di,
        v_dor,
        v_doi,
    } = line_voltages(cfg, e_dr, e_di, i_d, gamma);
    let rc_r = commutation_resistance(cfg.b_r, cfg.x_dr);
    let cos_alpha = (rc_r * i_d + v_dr) / v_dor;
    if !(-1.0..=1.0).contains(&cos_alpha) {
        return Err(Error::AlphaOutOfRange { cos_alpha });
    }
    Ok(DcLineSolution {
        v_dr,
        v_di,
        alpha: cos_alpha.acos(),
        cos_alpha,
        v_dor,
        v_doi,
    })
}

pub(crate) struct LineVoltages {
    pub v_dr: f64,
    pub v_di: f64,
    pub v_dor: f64,
    pub v_doi: f64,
}

/// Line voltages with the inverter on extinction-angle control; the
/// rectifier side follows from the inverter end plus the line drop.
pub(crate) fn line_voltages(
    cfg: &HvdcConfig,
    e_dr: f64,
    e_di: f64,
    i_d: f64,
    gamma: f64,
) -> LineVoltages {
    let v_dor = ideal_no_load_voltage(cfg.b_r, cfg.n_r, e_dr);
    let v_doi = ideal_no_load_voltage(cfg.b_i, cfg.n_i, e_di);
    let rc_i = commutation_resistance(cfg.b_i, cfg.x_di);
    LineVoltages {
        v_dr: (cfg.r_d - rc_i) * i_d + v_doi * gamma.cos(),
        v_di: v_doi * gamma.cos() - rc_i * i_d,
        v_dor,
        v_doi,
    }
}

/// Active power, reactive power and power-factor angle of one converter.
pub fn converter_pq(v_d: f64, v_do: f64, i_d: f64) -> Result<(f64, f64, f64)> {
    let cos_phi = v_d / v_do;
    if !(cos_phi > 0.0 && cos_phi <= 1.0) {
        return Err(Error::PowerFactorOutOfRange(cos_phi));
    }
    let phi = cos_phi.acos();
    let p = v_d * i_d;
    Ok((p, p * phi.tan(), phi))
}
