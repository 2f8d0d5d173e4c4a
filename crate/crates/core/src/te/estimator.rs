use serde::{Deserialize, Serialize};

use super::excitation::{max_potential_rate, screening_floor, ExcitationParams};
use super::screening::ScreeningState;
use super::tls::{
    potential_from_estimate, tls_solve, two_point_impedance, RegressionPair, RegressionWindow,
};
use crate::error::{Error, Result};
use crate::phasor::{delta, ComplexPhasor, PmuSample};

/// Estimator settings. Defaults are the reference tuning (k = 20, lambda = 0.8).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorConfig {
    /// Regression window length in admitted pairs.
    pub k: usize,
    /// Decay factor of the adaptive threshold.
    pub lambda: f64,
    /// Threshold coefficient applied to `|I|`.
    pub coeff: f64,
    /// Plausibility band for the potential magnitude, p.u.
    pub e_gate_min: f64,
    pub e_gate_max: f64,
    /// Conservative lower bound on `|E|` used to derive the screening floor.
    pub e_floor: f64,
    /// Fastest regulator near the terminal; `None` skips the floor check.
    pub excitation: Option<ExcitationParams>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            k: 20,
            lambda: 0.8,
            coeff: 0.15,
            e_gate_min: 0.5,
            e_gate_max: 1.5,
            e_floor: 0.5,
            excitation: Some(ExcitationParams::default()),
        }
    }
}

impl EstimatorConfig {
    /// Screening floor `dE_max / |E|_min` implied by the excitation model.
    pub fn floor(&self) -> Result<Option<f64>> {
        match &self.excitation {
            Some(p) => {
                let rate = max_potential_rate(p)?;
                Ok(Some(screening_floor(rate.de_max, self.e_floor)?))
            }
            None => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid("k", "window must hold at least two pairs"));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::invalid("lambda", "must lie in (0, 1)"));
        }
        if !(self.coeff > 0.0 && self.coeff <= 0.2) {
            return Err(Error::invalid("coeff", "must lie in (0, 0.2]"));
        }
        if !(self.e_gate_min < self.e_gate_max && self.e_gate_min >= 0.0) {
            return Err(Error::invalid("e_gate_min", "must be below e_gate_max"));
        }
        if let Some(floor) = self.floor()? {
            if self.coeff <= floor {
                return Err(Error::invalid(
                    "coeff",
                    format!(
                        "{} does not exceed the screening floor {floor:.5}",
                        self.coeff
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Thevenin source at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheveninEstimate {
    pub t: f64,
    /// p.u.
    pub r: f64,
    /// p.u.
    pub x: f64,
    /// p.u.
    pub e: ComplexPhasor,
    /// Pairs in the regression window.
    pub n_window: usize,
    /// The impedance was carried over from the previous step.
    pub held_over: bool,
}

/// Per-terminal streaming estimator.
///
/// Deltas are always formed from consecutive raw samples; screening and the
/// plausibility gate only decide whether a pair enters the window. Until
/// the first successful fit the estimator reports nothing.
#[derive(Debug, Clone)]
pub struct TheveninEstimator {
    cfg: EstimatorConfig,
    screening: ScreeningState,
    window: RegressionWindow,
    prev: Option<PmuSample>,
    n: u64,
    z: Option<(f64, f64)>,
    admitted: bool,
}

impl TheveninEstimator {
    pub fn new(cfg: EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(TheveninEstimator {
            screening: ScreeningState::new(cfg.lambda, cfg.coeff)?,
            window: RegressionWindow::new(cfg.k)?,
            cfg,
            prev: None,
            n: 0,
            z: None,
            admitted: false,
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.cfg
    }

    pub fn screening(&self) -> &ScreeningState {
        &self.screening
    }

    /// Whether the pair ending at the last sample entered the window.
    pub fn last_pair_admitted(&self) -> bool {
        self.admitted
    }

    pub fn window(&self) -> &RegressionWindow {
        &self.window
    }

    /// Sample index of the last processed sample (the first sample is 1).
    pub fn sample_index(&self) -> u64 {
        self.n
    }

    fn plausible(&self, r: f64, x: f64, e: ComplexPhasor) -> bool {
        let mag = e.norm();
        r > 0.0 && x > 0.0 && mag > self.cfg.e_gate_min && mag < self.cfg.e_gate_max
    }

    /// Feed one sample; returns the current estimate once one exists.
    pub fn update(&mut self, sample: &PmuSample) -> Result<Option<TheveninEstimate>> {
        self.admitted = false;
        let Some(prev) = self.prev.as_ref() else {
            self.n = 1;
            self.prev = Some(sample.clone());
            return Ok(None);
        };
        if !(sample.t > prev.t) {
            return Err(Error::NonIncreasingTime {
                prev: prev.t,
                next: sample.t,
            });
        }
        let (dv, di) = delta(prev, sample)?;
        self.n += 1;
        let n = self.n;

        let mut fresh = false;
        if self.screening.screen_pair(n, di.norm(), sample.i.norm()) {
            // Two-point solution of the pair gates admission.
            if let Ok((x2, r2)) = two_point_impedance(dv, di) {
                let e2 = potential_from_estimate(r2, x2, sample);
                if self.plausible(r2, x2, e2) {
                    self.window.push(RegressionPair { dv, di });
                    self.admitted = true;
                    if let Ok(sol) = tls_solve(self.window.iter()) {
                        let e = potential_from_estimate(sol.r, sol.x, sample);
                        if self.plausible(sol.r, sol.x, e) {
                            self.z = Some((sol.r, sol.x));
                            fresh = true;
                        }
                    }
                }
            }
        }
        self.prev = Some(sample.clone());

        Ok(self.z.map(|(r, x)| TheveninEstimate {
            t: sample.t,
            r,
            x,
            e: potential_from_estimate(r, x, sample),
            n_window: self.window.len(),
            held_over: !fresh,
        }))
    }
}
