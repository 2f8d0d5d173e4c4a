//! Alternating AC/DC fixed-point solve.

use super::ac::{ac_voltage_solve, compensator_q};
use super::converter::{converter_pq, dc_line_solve, line_voltages, LineVoltages};
use super::{AcSide, DcOperatingPoint, HvdcConfig, Side};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Stop when the squared change of the two bus voltages, kV^2, drops
    /// to this value.
    pub mu: f64,
    pub max_iter: usize,
    /// Starting bus voltages `(e_dr, e_di)` in kV; defaults to the source
    /// magnitudes.
    pub initial: Option<(f64, f64)>,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            mu: 1e-4,
            max_iter: 100,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointSolution {
    pub point: DcOperatingPoint,
    pub iterations: usize,
    /// Squared voltage change of every iteration, kV^2.
    pub distances: Vec<f64>,
}

/// `(p, q, phi)` of one converter.
type ConverterFlow = (f64, f64, f64);

/// One DC half-step: converter powers from the bus voltages (kV).
fn dc_half_step(
    cfg: &HvdcConfig,
    e_dr: f64,
    e_di: f64,
    i_d: f64,
) -> Result<(LineVoltages, ConverterFlow, ConverterFlow)> {
    let lv = line_voltages(cfg, e_dr, e_di, i_d, cfg.gamma_min());
    let rect = converter_pq(lv.v_dr, lv.v_dor, i_d)?;
    let inv = converter_pq(lv.v_di, lv.v_doi, i_d)?;
    Ok((lv, rect, inv))
}

/// One AC half-step: new bus voltages (kV) from the converter flows.
fn ac_half_step(
    cfg: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    e_dr: f64,
    e_di: f64,
    rect: ConverterFlow,
    inv: ConverterFlow,
) -> Result<(f64, f64)> {
    let vb = cfg.base.v_ac_base;
    let s = cfg.base.s_base;
    let q_acr = compensator_q(e_dr / vb, cfg.q_acr_rated);
    let q_aci = compensator_q(e_di / vb, cfg.q_aci_rated);
    let (p_ar, q_ar) = (rect.0 / s, (rect.1 - q_acr) / s);
    let (p_ai, q_ai) = (inv.0 / s, (q_aci - inv.1) / s);
    let new_r = ac_voltage_solve(ac_r.e_th.norm(), ac_r.x_th, p_ar, q_ar, Side::Rectifier)?;
    let new_i = ac_voltage_solve(ac_i.e_th.norm(), ac_i.x_th, p_ai, q_ai, Side::Inverter)?;
    Ok((new_r * vb, new_i * vb))
}

/// Steady state of the link at DC current `i_d` (kA) with the inverter at
/// minimum extinction angle.
///
/// Alternates between the converter equations at fixed bus voltages and
/// the AC interface equations at fixed converter flows until the bus
/// voltages settle.
pub fn acdc_fixed_point(
    cfg: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    i_d: f64,
    opts: &FixedPointOptions,
) -> Result<FixedPointSolution> {
    if !(i_d > 0.0) {
        return Err(Error::invalid("i_d", "must be positive"));
    }
    if !(opts.mu > 0.0) {
        return Err(Error::invalid("mu", "must be positive"));
    }
    let vb = cfg.base.v_ac_base;
    let (mut e_dr, mut e_di) = opts
        .initial
        .unwrap_or((ac_r.e_th.norm() * vb, ac_i.e_th.norm() * vb));
    let mut distances = Vec::new();

    for it in 1..=opts.max_iter {
        let (_, rect, inv) = dc_half_step(cfg, e_dr, e_di, i_d)?;
        let (new_r, new_i) = ac_half_step(cfg, ac_r, ac_i, e_dr, e_di, rect, inv)?;
        let d = (new_r - e_dr).powi(2) + (new_i - e_di).powi(2);
        distances.push(d);
        e_dr = new_r;
        e_di = new_i;
        if d <= opts.mu {
            let point = operating_point(cfg, e_dr, e_di, i_d)?;
            return Ok(FixedPointSolution {
                point,
                iterations: it,
                distances,
            });
        }
    }
    Err(Error::Divergence {
        iterations: opts.max_iter,
        distance: distances.last().copied().unwrap_or(f64::NAN),
    })
}

/// Full converter state at given bus voltages (kV).
pub(crate) fn operating_point(
    cfg: &HvdcConfig,
    e_dr: f64,
    e_di: f64,
    i_d: f64,
) -> Result<DcOperatingPoint> {
    let gamma = cfg.gamma_min();
    let line = dc_line_solve(cfg, e_dr, e_di, i_d, gamma)?;
    let (p_dr, q_dr, phi_r) = converter_pq(line.v_dr, line.v_dor, i_d)?;
    let (p_di, q_di, phi_i) = converter_pq(line.v_di, line.v_doi, i_d)?;
    Ok(DcOperatingPoint {
        i_d,
        v_dr: line.v_dr,
        v_di: line.v_di,
        alpha: line.alpha,
        gamma,
        p_dr,
        p_di,
        q_dr,
        q_di,
        e_dr,
        e_di,
        phi_r,
        phi_i,
    })
}

/// Apply one more DC and AC half-step to a converged point and return the
/// bus voltage changes (kV).
pub fn resubstitute(
    cfg: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    point: &DcOperatingPoint,
) -> Result<(f64, f64)> {
    let (_, rect, inv) = dc_half_step(cfg, point.e_dr, point.e_di, point.i_d)?;
    let (r, i) = ac_half_step(cfg, ac_r, ac_i, point.e_dr, point.e_di, rect, inv)?;
    Ok((r - point.e_dr, i - point.e_di))
}

/// DC current (kA) at which the rectifier delivers `p_target` MW.
fn current_for_power(
    cfg: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    p_target: f64,
    opts: &FixedPointOptions,
) -> Result<DcOperatingPoint> {
    let mut i_d = p_target / cfg.base.v_dc_nom;
    let mut fp = *opts;
    for _ in 0..200 {
        let sol = acdc_fixed_point(cfg, ac_r, ac_i, i_d, &fp)?;
        fp.initial = Some((sol.point.e_dr, sol.point.e_di));
        let next = p_target / sol.point.v_dr;
        if (next - i_d).abs() < 1e-10 {
            return Ok(sol.point);
        }
        i_d = next;
    }
    Err(Error::Divergence {
        iterations: 200,
        distance: f64::NAN,
    })
}

/// Rectifier transformer ratio that puts the firing angle at `alpha_target`
/// (rad) when the link carries `p_target` MW.
pub fn solve_rectifier_tap(
    cfg: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    p_target: f64,
    alpha_target: f64,
    opts: &FixedPointOptions,
) -> Result<f64> {
    if !(p_target > 0.0) {
        return Err(Error::invalid("p_target", "must be positive"));
    }
    // The firing angle grows with the ratio: a larger no-load voltage needs
    // more delay to hold the same DC voltage.
    let alpha_at = |n_r: f64| -> Result<f64> {
        let trial = HvdcConfig { n_r, ..*cfg };
        match current_for_power(&trial, ac_r, ac_i, p_target, opts) {
            Ok(p) => Ok(p.alpha),
            // Too little no-load voltage for the requested power: the
            // current needed collapses the bus or exceeds what zero delay
            // can deliver.
            Err(e) if e.is_infeasible() && n_r < cfg.n_r => Ok(-1.0),
            Err(e) => Err(e),
        }
    };
    // Walk out from the configured ratio in 2% steps until the target is
    // bracketed.
    let unreachable = || {
        Error::invalid(
            "alpha_target",
            "not reachable within a factor of two of n_r",
        )
    };
    let (mut lo, mut hi) = (cfg.n_r, cfg.n_r);
    if alpha_at(cfg.n_r)? < alpha_target {
        while alpha_at(hi)? < alpha_target {
            lo = hi;
            hi *= 1.02;
            if hi > 2.0 * cfg.n_r {
                return Err(unreachable());
            }
        }
    } else {
        while alpha_at(lo)? >= alpha_target {
            hi = lo;
            lo /= 1.02;
            if lo < 0.5 * cfg.n_r {
                return Err(unreachable());
            }
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if alpha_at(mid)? < alpha_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
