//! Stepping the DC current up until a limit is hit.

use crate::acdc::{
    acdc_fixed_point, converter_rating_limit, vdcol_limit, AcSide, DcOperatingPoint,
    FixedPointOptions, HvdcConfig, Side,
};
use crate::error::{Error, Result};

use super::Binding;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// Current step, kA.
    pub delta_id: f64,
    /// Width of the final bracket around a limit, kA.
    pub refine_tol: f64,
    /// Side whose power is reported and watched for rollover.
    pub report_side: Side,
    pub fixed_point: FixedPointOptions,
    /// Seconds since the power boost began; selects the converter rating.
    pub t_since_boost: f64,
    /// Hard cap on sweep steps.
    pub max_steps: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            delta_id: 0.01,
            refine_tol: 1e-4,
            report_side: Side::Rectifier,
            fixed_point: FixedPointOptions::default(),
            t_since_boost: 0.0,
            max_steps: 100_000,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_id > 0.0 && self.delta_id.is_finite()) {
            return Err(Error::invalid("delta_id", "must be positive"));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol <= self.delta_id) {
            return Err(Error::invalid("refine_tol", "must lie in (0, delta_id]"));
        }
        if !(self.t_since_boost >= 0.0) {
            return Err(Error::invalid("t_since_boost", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub binding: Binding,
    /// Feasible points, strictly increasing in current. Empty when even the
    /// starting current is infeasible.
    pub points: Vec<DcOperatingPoint>,
    pub other_side_rollover: bool,
}

impl SweepOutcome {
    pub fn last(&self) -> Option<&DcOperatingPoint> {
        self.points.last()
    }
}

/// Limit violated by a converged point, checked in a fixed order.
pub fn violation(cfg: &HvdcConfig, p: &DcOperatingPoint, t_since_boost: f64) -> Option<Binding> {
    let i_dn = cfg.i_dn();
    let vb = cfg.base.v_ac_base;
    if p.alpha < cfg.alpha_min() {
        Some(Binding::AlphaMin)
    } else if p.i_d > vdcol_limit(&cfg.vdcol, p.v_mid() / cfg.base.v_dc_nom) * i_dn {
        Some(Binding::Vdcol)
    } else if p.i_d > converter_rating_limit(t_since_boost, i_dn, cfg) {
        Some(Binding::ConverterRating)
    } else if p.e_dr.min(p.e_di) < cfg.e_min * vb {
        Some(Binding::EMin)
    } else if p.e_dr.max(p.e_di) > cfg.e_max * vb {
        Some(Binding::EMax)
    } else {
        None
    }
}

enum Eval {
    Ok(DcOperatingPoint),
    Violated(Binding),
}

struct Sweeper<'a> {
    hvdc: &'a HvdcConfig,
    ac_r: &'a AcSide,
    ac_i: &'a AcSide,
    cfg: &'a SweepConfig,
}

impl Sweeper<'_> {
    fn eval(&self, i_d: f64, warm: Option<&DcOperatingPoint>) -> Result<Eval> {
        let opts = FixedPointOptions {
            initial: warm
                .map(|p| (p.e_dr, p.e_di))
                .or(self.cfg.fixed_point.initial),
            ..self.cfg.fixed_point
        };
        match acdc_fixed_point(self.hvdc, self.ac_r, self.ac_i, i_d, &opts) {
            Ok(sol) => Ok(
                match violation(self.hvdc, &sol.point, self.cfg.t_since_boost) {
                    Some(b) => Eval::Violated(b),
                    None => Eval::Ok(sol.point),
                },
            ),
            // cos(alpha) above one: the rectifier cannot reach the voltage
            // even at zero delay, which is the firing-angle limit.
            Err(Error::AlphaOutOfRange { cos_alpha }) if cos_alpha > 1.0 => {
                Ok(Eval::Violated(Binding::AlphaMin))
            }
            Err(e) if e.is_infeasible() => Ok(Eval::Violated(Binding::Infeasible)),
            Err(e) => Err(e),
        }
    }

    /// Narrow `(lo, hi)` where `lo` is feasible and `hi` violates a limit.
    fn refine(
        &self,
        mut lo: DcOperatingPoint,
        mut hi: f64,
        mut binding: Binding,
    ) -> Result<(DcOperatingPoint, Binding)> {
        while hi - lo.i_d > self.cfg.refine_tol {
            let mid = 0.5 * (lo.i_d + hi);
            match self.eval(mid, Some(&lo))? {
                Eval::Ok(p) => lo = p,
                Eval::Violated(b) => {
                    hi = mid;
                    binding = b;
                }
            }
        }
        Ok((lo, binding))
    }
}

/// Raise the DC current from `i_start` (kA) in steps of `delta_id` until a
/// limit is violated, the model has no solution, or the reported power
/// stops growing.
///
/// Limit crossings are bracketed down to `refine_tol`. A power peak is
/// reported at the last grid point before the drop.
pub fn capacity_sweep(
    hvdc: &HvdcConfig,
    ac_r: &AcSide,
    ac_i: &AcSide,
    i_start: f64,
    cfg: &SweepConfig,
) -> Result<SweepOutcome> {
    hvdc.validate()?;
    ac_r.validate()?;
    ac_i.validate()?;
    cfg.validate()?;
    if !(i_start > 0.0 && i_start.is_finite()) {
        return Err(Error::invalid("i_start", "must be positive"));
    }
    let s = Sweeper {
        hvdc,
        ac_r,
        ac_i,
        cfg,
    };
    let side = cfg.report_side;
    let other = match side {
        Side::Rectifier => Side::Inverter,
        Side::Inverter => Side::Rectifier,
    };

    let first = match s.eval(i_start, None)? {
        Eval::Ok(p) => p,
        Eval::Violated(binding) => {
            return Ok(SweepOutcome {
                binding,
                points: Vec::new(),
                other_side_rollover: false,
            })
        }
    };
    let mut points = vec![first];
    let mut other_side_rollover = false;

    for step in 1..=cfg.max_steps {
        let prev = *points.last().expect("sweep holds the starting point");
        let i_d = i_start + step as f64 * cfg.delta_id;
        match s.eval(i_d, Some(&prev))? {
            Eval::Ok(p) => {
                if p.power(side) < prev.power(side) {
                    return Ok(SweepOutcome {
                        binding: Binding::PowerRollover,
                        points,
                        other_side_rollover,
                    });
                }
                if p.power(other) < prev.power(other) {
                    other_side_rollover = true;
                }
                points.push(p);
            }
            Eval::Violated(binding) => {
                let (edge, binding) = s.refine(prev, i_d, binding)?;
                if edge.i_d > prev.i_d {
                    points.push(edge);
                }
                return Ok(SweepOutcome {
                    binding,
                    points,
                    other_side_rollover,
                });
            }
        }
    }
    Err(Error::invalid(
        "max_steps",
        format!("no limit reached within {} steps", cfg.max_steps),
    ))
}
