//! Bounds on how fast the Thevenin potential can move between samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::ComplexPhasor;

/// Exciter and field parameters of the fastest regulator near the terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationParams {
    /// Exciter time constant, s.
    pub t_ff: f64,
    /// d-axis transient open-circuit time constant, s.
    pub t_d0p: f64,
    /// Largest exciter input step, p.u.
    pub du_max: f64,
    /// PMU sampling interval, s.
    pub dt: f64,
}

impl Default for ExcitationParams {
    fn default() -> Self {
        ExcitationParams {
            t_ff: 0.53,
            t_d0p: 5.0,
            du_max: 10.0,
            dt: 0.01,
        }
    }
}

impl ExcitationParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t_ff", self.t_ff), ("t_d0p", self.t_d0p), ("dt", self.dt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.du_max.is_finite() && self.du_max >= 0.0) {
            return Err(Error::invalid("du_max", "must be non-negative"));
        }
        if (self.t_d0p - self.t_ff).abs() <= 1e-12 * self.t_d0p.max(self.t_ff) {
            return Err(Error::invalid(
                "t_d0p",
                "equal exciter and field time constants make the response singular",
            ));
        }
        Ok(())
    }

    /// Instant of steepest rise of the field response to a step input.
    pub fn steepest_time(&self) -> f64 {
        let (a, b) = (self.t_ff, self.t_d0p);
        a * b / (b - a) * (b / a).ln()
    }
}

/// Response of the transient potential to a `du_max` exciter step, p.u.
pub fn potential_increment(p: &ExcitationParams, t: f64) -> f64 {
    let (a, b) = (p.t_ff, p.t_d0p);
    p.du_max * (1.0 + (-t / a).exp() / (b / a - 1.0) + (-t / b).exp() / (a / b - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialRate {
    /// Peak rate of change, p.u./s.
    pub rate: f64,
    /// Largest change within one sampling interval, p.u.
    pub de_max: f64,
    /// Time of the peak, s.
    pub t_peak: f64,
}

/// Peak slope of [`potential_increment`] and the matching per-sample bound.
pub fn max_potential_rate(p: &ExcitationParams) -> Result<PotentialRate> {
    p.validate()?;
    let (a, b) = (p.t_ff, p.t_d0p);
    let t0 = p.steepest_time();
    let rate =
        p.du_max * (-(-t0 / a).exp() / (a * (b / a - 1.0)) - (-t0 / b).exp() / (b * (a / b - 1.0)));
    Ok(PotentialRate {
        rate,
        de_max: rate * p.dt,
        t_peak: t0,
    })
}

/// Smallest admissible `|dI| / |I|` ratio given the potential bound.
pub fn screening_floor(de_max: f64, e_min: f64) -> Result<f64> {
    if !(e_min > 0.0) {
        return Err(Error::invalid("e_min", "must be positive"));
    }
    Ok(de_max / e_min)
}

/// Potential change at the terminal of a network reduced to `m` generator
/// branches of susceptance `B_i` plus a shunt conductance `g0`.
///
/// Returns the terminal change and whether it stays within the largest
/// generator change (only asserted when `g0 == 0`). The bound relies on all
/// branch susceptances sharing one sign, as they do for inductive branches.
pub fn multimachine_bound_check(
    branch_susceptances: &[f64],
    generator_deltas: &[ComplexPhasor],
    g0: f64,
) -> Result<(ComplexPhasor, bool)> {
    if branch_susceptances.is_empty() {
        return Err(Error::Empty("branch susceptances"));
    }
    if branch_susceptances.len() != generator_deltas.len() {
        return Err(Error::invalid(
            "generator_deltas",
            "must have one entry per branch",
        ));
    }
    if branch_susceptances
        .iter()
        .any(|b| *b == 0.0 || !b.is_finite())
    {
        return Err(Error::invalid(
            "branch_susceptances",
            "must be finite and nonzero",
        ));
    }
    let j = ComplexPhasor::i();
    let num: ComplexPhasor = branch_susceptances
        .iter()
        .zip(generator_deltas)
        .map(|(b, de)| de * j * *b)
        .sum();
    let den = ComplexPhasor::new(g0, branch_susceptances.iter().sum());
    let de = num / den;
    let worst = generator_deltas
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max);
    let bound_ok = g0 != 0.0 || de.norm() <= worst * (1.0 + 1e-12);
    Ok((de, bound_ok))
}
