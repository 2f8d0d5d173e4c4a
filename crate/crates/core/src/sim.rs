//! Synthetic PMU trajectories with known ground truth.
//!
//! The link is represented by a series impedance `Z_d` behind the converter
//! bus, so every sample solves `I = E / (Z + Z_d)`, `V = E - Z I`. Events
//! reshape `Z_d` (faults, switching) or move the source potential.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::acdc::AcSide;
use crate::error::{Error, Result};
use crate::phasor::{ComplexPhasor, PerUnitBase, PmuSample};
use crate::te::{max_potential_rate, ExcitationParams};

fn default_tau() -> f64 {
    0.15
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// `Z_d` collapses to `z_fault` for `duration` seconds, then its
    /// admittance relaxes back to the pre-fault value with time constant
    /// `tau`.
    FaultStep {
        duration: f64,
        z_fault: ComplexPhasor,
        #[serde(default = "default_tau")]
        tau: f64,
    },
    /// `Z_d` jumps to `z_step`, then its admittance settles on `z_final`.
    ImpedanceSwitch {
        z_step: ComplexPhasor,
        z_final: ComplexPhasor,
        #[serde(default = "default_tau")]
        tau: f64,
    },
    /// The potential target moves by `de` p.u. in magnitude, linearly over
    /// `duration` seconds.
    PotentialRamp { de: f64, duration: f64 },
    /// Losing shunt compensation lowers the potential target by `drop` p.u.
    CompensatorTrip { drop: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

fn default_dt() -> f64 {
    0.01
}

fn default_terminal() -> String {
    "rectifier".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// True source and impedance behind the measured bus.
    pub te_true: AcSide,
    /// Equivalent impedance of the link before any event, p.u.
    pub z_d0: ComplexPhasor,
    /// Regulator model limiting how fast the potential can move.
    #[serde(default)]
    pub potential_dynamics: Option<ExcitationParams>,
    #[serde(default)]
    pub events: Vec<Event>,
    /// Per-channel Gaussian variance added to the measurements.
    #[serde(default)]
    pub noise_variance: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_terminal")]
    pub terminal_id: String,
    /// Used only to express the transferred power as a DC current.
    #[serde(default)]
    pub base: PerUnitBase,
}

impl ScenarioConfig {
    pub fn new(duration: f64, te_true: AcSide, z_d0: ComplexPhasor) -> Self {
        ScenarioConfig {
            duration,
            dt: default_dt(),
            te_true,
            z_d0,
            potential_dynamics: None,
            events: Vec::new(),
            noise_variance: 0.0,
            seed: 0,
            terminal_id: default_terminal(),
            base: PerUnitBase::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", "must be positive"));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::invalid("duration", "must be non-negative"));
        }
        if !(self.noise_variance >= 0.0) {
            return Err(Error::invalid("noise_variance", "must be non-negative"));
        }
        if self.te_true.x_th < 0.0 || self.te_true.r_th < 0.0 {
            return Err(Error::invalid("te_true", "impedance must be non-negative"));
        }
        if self.z_d0.norm() == 0.0 {
            return Err(Error::invalid("z_d0", "must be non-zero"));
        }
        self.base.validate()?;
        if let Some(p) = &self.potential_dynamics {
            p.validate()?;
        }
        let mut last = 0.0;
        for ev in &self.events {
            if !(ev.t >= last && ev.t <= self.duration) {
                return Err(Error::invalid(
                    "events",
                    "must be time ordered within [0, duration]",
                ));
            }
            last = ev.t;
            let bad = match ev.kind {
                EventKind::FaultStep {
                    duration,
                    z_fault,
                    tau,
                } => !(duration >= 0.0 && tau >= 0.0 && z_fault.norm() > 0.0),
                EventKind::ImpedanceSwitch {
                    z_step,
                    z_final,
                    tau,
                } => !(tau >= 0.0 && z_step.norm() > 0.0 && z_final.norm() > 0.0),
                EventKind::PotentialRamp { de, duration } => !(de.is_finite() && duration >= 0.0),
                EventKind::CompensatorTrip { drop } => !drop.is_finite(),
            };
            if bad {
                return Err(Error::invalid(
                    "events",
                    format!("bad parameters at t = {}", ev.t),
                ));
            }
        }
        Ok(())
    }
}

/// One generated step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// What a PMU would report, noise included.
    pub sample: PmuSample,
    pub e_true: ComplexPhasor,
    pub z_true: ComplexPhasor,
    pub z_d_true: ComplexPhasor,
    /// DC current implied by the transferred power at nominal DC voltage, kA.
    pub i_d_true: f64,
}

/// Admittance of the link: held at `y_start` until `hold_until`, then
/// relaxing exponentially towards `y_final`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    y_start: ComplexPhasor,
    y_final: ComplexPhasor,
    hold_until: f64,
    tau: f64,
}

impl Segment {
    fn at(&self, t: f64) -> ComplexPhasor {
        if t < self.hold_until {
            self.y_start
        } else if self.tau == 0.0 {
            self.y_final
        } else {
            let w = (-(t - self.hold_until) / self.tau).exp();
            self.y_final + (self.y_start - self.y_final) * w
        }
    }
}

/// Potential magnitude target: piecewise linear in time.
#[derive(Debug, Clone, Copy)]
struct Ramp {
    t0: f64,
    from: f64,
    to: f64,
    duration: f64,
}

impl Ramp {
    fn at(&self, t: f64) -> f64 {
        if t <= self.t0 {
            self.from
        } else if self.duration == 0.0 || t >= self.t0 + self.duration {
            self.to
        } else {
            self.from + (self.to - self.from) * (t - self.t0) / self.duration
        }
    }
}

/// Add zero-mean Gaussian noise of `variance` to the four rectangular
/// channels of a sample.
pub fn inject_noise(sample: &PmuSample, variance: f64, rng: &mut ChaCha8Rng) -> Result<PmuSample> {
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(Error::invalid("variance", "must be non-negative"));
    }
    if variance == 0.0 {
        return Ok(sample.clone());
    }
    let normal =
        Normal::new(0.0, variance.sqrt()).map_err(|e| Error::invalid("variance", e.to_string()))?;
    let mut draw = || normal.sample(rng);
    let v = sample.v + ComplexPhasor::new(draw(), draw());
    let i = sample.i + ComplexPhasor::new(draw(), draw());
    Ok(PmuSample::new(sample.t, v, i, sample.terminal_id.clone()))
}

/// Per-step potential change bound for a regulator sampled every `dt`.
fn potential_step_bound(p: &ExcitationParams, dt: f64) -> Result<f64> {
    Ok(max_potential_rate(p)?.rate * dt)
}

/// Generate the trajectory described by `cfg`.
pub fn generate(cfg: &ScenarioConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let z = ComplexPhasor::new(cfg.te_true.r_th, cfg.te_true.x_th);
    let e0 = cfg.te_true.e_th;
    let angle = ComplexPhasor::from_polar(1.0, e0.arg());
    let step_bound = match &cfg.potential_dynamics {
        Some(p) => Some(potential_step_bound(p, cfg.dt)?),
        None => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = (cfg.duration / cfg.dt).round() as usize + 1;

    let y0 = 1.0 / cfg.z_d0;
    let mut seg = Segment {
        y_start: y0,
        y_final: y0,
        hold_until: 0.0,
        tau: 0.0,
    };
    let mut ramp = Ramp {
        t0: 0.0,
        from: e0.norm(),
        to: e0.norm(),
        duration: 0.0,
    };
    let mut events = cfg.events.iter().peekable();
    let mut e_mag = e0.norm();
    let mut out = Vec::with_capacity(n);

    for k in 0..n {
        let t = k as f64 * cfg.dt;
        while let Some(ev) = events.next_if(|ev| ev.t <= t + 1e-9 * cfg.dt) {
            let target_now = ramp.at(ev.t);
            match ev.kind {
                EventKind::FaultStep {
                    duration,
                    z_fault,
                    tau,
                } => {
                    seg = Segment {
                        y_start: 1.0 / z_fault,
                        y_final: seg.at(ev.t),
                        hold_until: ev.t + duration,
                        tau,
                    };
                }
                EventKind::ImpedanceSwitch {
                    z_step,
                    z_final,
                    tau,
                } => {
                    seg = Segment {
                        y_start: 1.0 / z_step,
                        y_final: 1.0 / z_final,
                        hold_until: ev.t,
                        tau,
                    };
                }
                EventKind::PotentialRamp { de, duration } => {
                    ramp = Ramp {
                        t0: ev.t,
                        from: target_now,
                        to: target_now + de,
                        duration,
                    };
                }
                EventKind::CompensatorTrip { drop } => {
                    ramp = Ramp {
                        t0: ev.t,
                        from: target_now - drop,
                        to: target_now - drop,
                        duration: 0.0,
                    };
                }
            }
        }

        let target = ramp.at(t);
        e_mag = match step_bound {
            Some(b) if k > 0 => e_mag + (target - e_mag).clamp(-b, b),
            _ => target,
        };
        let e = angle * e_mag;
        let z_d = 1.0 / seg.at(t);
        let i = e / (z + z_d);
        let v = e - z * i;
        let clean = PmuSample::new(t, v, i, cfg.terminal_id.clone());
        let p_mw = (v * i.conj()).re * cfg.base.s_base;
        let sample = inject_noise(&clean, cfg.noise_variance, &mut rng)?;
        out.push(TrajectoryRecord {
            sample,
            e_true: e,
            z_true: z,
            z_d_true: z_d,
            i_d_true: p_mw / cfg.base.v_dc_nom,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPhasor {
        ComplexPhasor::new(re, im)
    }

    fn base() -> ScenarioConfig {
        ScenarioConfig::new(
            1.0,
            AcSide {
                e_th: c(1.0, 0.1),
                x_th: 0.235,
                r_th: 0.01,
            },
            c(0.8, 0.3),
        )
    }

    #[test]
    fn quiet_scenario_is_constant() {
        let traj = generate(&base()).unwrap();
        assert_eq!(traj.len(), 101);
        for w in traj.windows(2) {
            assert_eq!(w[0].sample.v, w[1].sample.v);
            assert_eq!(w[0].sample.i, w[1].sample.i);
        }
    }

    #[test]
    fn circuit_law_holds() {
        let mut cfg = base();
        cfg.events.push(Event {
            t: 0.3,
            kind: EventKind::FaultStep {
                duration: 0.1,
                z_fault: c(0.05, 0.02),
                tau: 0.15,
            },
        });
        for r in generate(&cfg).unwrap() {
            let resid = r.e_true - r.z_true * r.sample.i - r.sample.v;
            assert!(resid.norm() < 1e-12);
        }
    }

    #[test]
    fn switch_settles_exponentially() {
        let mut cfg = base();
        let (z_step, z_final, tau) = (c(0.5, 0.1), c(0.8, 0.3), 0.05);
        cfg.events.push(Event {
            t: 0.2,
            kind: EventKind::ImpedanceSwitch {
                z_step,
                z_final,
                tau,
            },
        });
        let traj = generate(&cfg).unwrap();
        let i_before = traj[19].sample.i;
        let i_at = traj[20].sample.i;
        assert!((i_at - i_before).norm() > 0.1 * i_before.norm());
        let (y_s, y_f) = (1.0 / z_step, 1.0 / z_final);
        for r in &traj[20..] {
            let y = y_f + (y_s - y_f) * (-(r.sample.t - 0.2) / tau).exp();
            assert!((r.z_d_true - 1.0 / y).norm() < 1e-12);
        }
    }

    #[test]
    fn potential_respects_regulator_speed() {
        let mut cfg = base();
        let p = ExcitationParams::default();
        cfg.potential_dynamics = Some(p);
        cfg.events.push(Event {
            t: 0.1,
            kind: EventKind::CompensatorTrip { drop: 0.1 },
        });
        cfg.events.push(Event {
            t: 0.5,
            kind: EventKind::PotentialRamp {
                de: 0.2,
                duration: 0.1,
            },
        });
        let bound = max_potential_rate(&p).unwrap().rate * cfg.dt;
        let traj = generate(&cfg).unwrap();
        let mut moved = false;
        for w in traj.windows(2) {
            let de = (w[1].e_true - w[0].e_true).norm();
            assert!(de <= bound * (1.0 + 1e-12), "{de} > {bound}");
            moved |= de > 0.5 * bound;
        }
        assert!(moved);
    }

    #[test]
    fn noise_is_seeded() {
        let mut cfg = base();
        cfg.noise_variance = 1e-3;
        cfg.seed = 42;
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        cfg.seed = 43;
        assert_ne!(a, generate(&cfg).unwrap());
    }

    #[test]
    fn noise_has_requested_variance() {
        let s = PmuSample::new(0.0, c(1.0, 0.0), c(0.5, -0.1), "r");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let noisy = inject_noise(&s, 1e-3, &mut rng).unwrap();
            acc += (noisy.v.re - 1.0).powi(2);
        }
        let var = acc / n as f64;
        assert!((var - 1e-3).abs() < 0.05e-3, "{var}");
        assert_eq!(inject_noise(&s, 0.0, &mut rng).unwrap(), s);
    }

    #[test]
    fn rejects_unordered_events() {
        let mut cfg = base();
        cfg.events = vec![
            Event {
                t: 0.5,
                kind: EventKind::CompensatorTrip { drop: 0.1 },
            },
            Event {
                t: 0.2,
                kind: EventKind::CompensatorTrip { drop: 0.1 },
            },
        ];
        assert!(generate(&cfg).is_err());
        let mut cfg = base();
        cfg.dt = 0.0;
        assert!(generate(&cfg).is_err());
    }
}
