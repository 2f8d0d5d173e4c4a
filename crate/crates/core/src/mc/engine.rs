//! Streaming capacity estimation for one link.

use serde::{Deserialize, Serialize};

use crate::acdc::{AcSide, HvdcConfig, Side};
use crate::error::{Error, Result};
use crate::phasor::PmuSample;
use crate::te::{EstimatorConfig, TheveninEstimate, TheveninEstimator};

use super::sweep::{capacity_sweep, SweepConfig};
use super::{Binding, McResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEngineConfig {
    pub hvdc: HvdcConfig,
    /// Terminal whose PMU stream drives the estimator.
    pub estimated_side: Side,
    /// Fixed equivalent of the other terminal's grid.
    pub other: AcSide,
    pub sweep: SweepConfig,
    /// Time the emergency boost began; the rating clock runs from here.
    pub boost_start: Option<f64>,
    /// Present DC current (kA) used when a sample carries none.
    pub i_d_initial: f64,
    pub estimator: EstimatorConfig,
}

impl Default for McEngineConfig {
    fn default() -> Self {
        McEngineConfig {
            hvdc: HvdcConfig::default(),
            estimated_side: Side::Rectifier,
            other: AcSide::new(1.0, 0.01),
            sweep: SweepConfig::default(),
            boost_start: None,
            i_d_initial: 1.2,
            estimator: EstimatorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum McStep {
    /// The estimator has not produced an equivalent yet.
    NoEstimate {
        t: f64,
    },
    Result(Box<McResult>),
}

impl McStep {
    pub fn result(&self) -> Option<&McResult> {
        match self {
            McStep::Result(r) => Some(r),
            McStep::NoEstimate { .. } => None,
        }
    }
}

/// Thevenin tracking plus a capacity sweep after every sample.
#[derive(Debug, Clone)]
pub struct McEngine {
    cfg: McEngineConfig,
    estimator: TheveninEstimator,
}

impl McEngine {
    pub fn new(cfg: McEngineConfig) -> Result<Self> {
        cfg.hvdc.validate()?;
        cfg.other.validate()?;
        cfg.sweep.validate()?;
        if !(cfg.i_d_initial > 0.0) {
            return Err(Error::invalid("i_d_initial", "must be positive"));
        }
        Ok(McEngine {
            estimator: TheveninEstimator::new(cfg.estimator)?,
            cfg,
        })
    }

    pub fn config(&self) -> &McEngineConfig {
        &self.cfg
    }

    pub fn estimator(&self) -> &TheveninEstimator {
        &self.estimator
    }

    /// Process one sample. `i_d` is the measured DC current in kA, if known.
    pub fn step(&mut self, sample: &PmuSample, i_d: Option<f64>) -> Result<McStep> {
        let Some(te) = self.estimator.update(sample)? else {
            return Ok(McStep::NoEstimate { t: sample.t });
        };
        let i_d = i_d.unwrap_or(self.cfg.i_d_initial);
        Ok(McStep::Result(Box::new(self.evaluate(sample, te, i_d)?)))
    }

    /// Capacity for a given equivalent, independent of the stream state.
    pub fn evaluate(&self, sample: &PmuSample, te: TheveninEstimate, i_d: f64) -> Result<McResult> {
        let estimated = AcSide {
            e_th: te.e,
            x_th: te.x,
            r_th: te.r,
        };
        let (ac_r, ac_i) = match self.cfg.estimated_side {
            Side::Rectifier => (estimated, self.cfg.other),
            Side::Inverter => (self.cfg.other, estimated),
        };
        let sweep_cfg = SweepConfig {
            t_since_boost: self
                .cfg
                .boost_start
                .map_or(0.0, |t0| (sample.t - t0).max(0.0)),
            ..self.cfg.sweep
        };
        let out = capacity_sweep(&self.cfg.hvdc, &ac_r, &ac_i, i_d, &sweep_cfg)?;
        let (mc_power, i_d_at_mc, binding) = match out.last() {
            Some(p) => (p.power(sweep_cfg.report_side), p.i_d, out.binding),
            None => {
                // Nothing feasible above the present point: report what is
                // flowing now.
                let p_now = (sample.v * sample.i.conj()).re.abs() * self.cfg.hvdc.base.s_base;
                (p_now, i_d, Binding::Infeasible)
            }
        };
        Ok(McResult {
            t: sample.t,
            mc_power,
            binding,
            i_d_at_mc,
            sweep: out.points,
            te: Some(te),
            other_side_rollover: out.other_side_rollover,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasor::ComplexPhasor;

    #[test]
    fn silent_until_an_estimate_exists() {
        let mut eng = McEngine::new(McEngineConfig::default()).unwrap();
        let s = PmuSample::new(
            0.0,
            ComplexPhasor::new(1.0, 0.0),
            ComplexPhasor::new(0.6, -0.3),
            "r",
        );
        assert_eq!(eng.step(&s, None).unwrap(), McStep::NoEstimate { t: 0.0 });
    }

    #[test]
    fn evaluate_uses_the_estimate() {
        let eng = McEngine::new(McEngineConfig::default()).unwrap();
        let s = PmuSample::new(
            0.5,
            ComplexPhasor::new(0.98, 0.0),
            ComplexPhasor::new(0.6, -0.3),
            "r",
        );
        let te = TheveninEstimate {
            t: 0.5,
            r: 0.0,
            x: 0.2,
            e: ComplexPhasor::new(1.0, 0.0),
            n_window: 5,
            held_over: false,
        };
        let r = eng.evaluate(&s, te, 1.2).unwrap();
        assert_eq!(r.binding, Binding::AlphaMin);
        assert!((r.mc_power - 861.8).abs() < 8.6, "{}", r.mc_power);
        assert_eq!(r.mc_power, r.sweep.last().unwrap().p_dr);
    }

    #[test]
    fn hopeless_grid_reports_present_power() {
        let cfg = McEngineConfig {
            other: AcSide::new(1.0, 1.5),
            ..Default::default()
        };
        let eng = McEngine::new(cfg).unwrap();
        let s = PmuSample::new(
            0.5,
            ComplexPhasor::new(0.9, 0.0),
            ComplexPhasor::new(0.5, -0.2),
            "r",
        );
        let te = TheveninEstimate {
            t: 0.5,
            r: 0.0,
            x: 1.5,
            e: ComplexPhasor::new(1.0, 0.0),
            n_window: 2,
            held_over: false,
        };
        let r = eng.evaluate(&s, te, 2.0).unwrap();
        assert_eq!(r.binding, Binding::Infeasible);
        assert!((r.mc_power - 450.0).abs() < 1e-9);
        assert!(r.sweep.is_empty());
    }
}
