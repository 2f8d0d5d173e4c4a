//! Current limits and control-mode classification.

use serde::{Deserialize, Serialize};

use super::{HvdcConfig, VdcolCurve};

/// Current ceiling at DC voltage `v_d` (both per-unit).
pub fn vdcol_limit(curve: &VdcolCurve, v_d: f64) -> f64 {
    if v_d >= curve.v2 {
        curve.i2 + curve.k2 * (v_d - curve.v2)
    } else if v_d > curve.v1 {
        curve.i1 + curve.k1 * (v_d - curve.v1)
    } else {
        curve.i1
    }
}

/// Converter thermal rating `t` seconds after the power boost began,
/// per-unit of the rated current `i_dn`.
pub fn converter_rating_limit(t_since_boost: f64, i_dn: f64, cfg: &HvdcConfig) -> f64 {
    if t_since_boost <= cfg.i_ra_window {
        cfg.i_ra_short * i_dn
    } else {
        cfg.i_ra_long * i_dn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ControlMode {
    /// Rectifier on current control, inverter on minimum extinction angle.
    CcCea,
    /// Rectifier at minimum firing angle, inverter on current deviation.
    CiaCd,
    /// Rectifier at minimum firing angle, inverter on current control.
    CiaCc,
    Unknown,
}

/// Matching tolerances for [`classify_control_mode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTolerance {
    /// rad.
    pub angle: f64,
    /// kA.
    pub current: f64,
}

impl Default for ModeTolerance {
    fn default() -> Self {
        ModeTolerance {
            angle: 0.05f64.to_radians(),
            current: 1e-3,
        }
    }
}

/// Angles in radians, currents in kA.
pub fn classify_control_mode(
    alpha: f64,
    gamma: f64,
    i_d: f64,
    i_ord: f64,
    cfg: &HvdcConfig,
    tol: ModeTolerance,
) -> ControlMode {
    let at_alpha_min = (alpha - cfg.alpha_min()).abs() <= tol.angle;
    let at_gamma_min = (gamma - cfg.gamma_min()).abs() <= tol.angle;
    let deviation = i_ord - i_d;
    let margin = cfg.i_margin * cfg.i_dn();

    if alpha > cfg.alpha_min() + tol.angle && at_gamma_min && deviation.abs() <= tol.current {
        ControlMode::CcCea
    } else if at_alpha_min && (deviation - margin).abs() <= tol.current {
        ControlMode::CiaCc
    } else if at_alpha_min && gamma > cfg.gamma_min() + tol.angle && deviation > tol.current {
        ControlMode::CiaCd
    } else {
        ControlMode::Unknown
    }
}
