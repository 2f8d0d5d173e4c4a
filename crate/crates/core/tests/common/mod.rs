//! Scenarios shared by the integration tests.
#![allow(dead_code)]

use hvdc_mc::acdc::{AcSide, HvdcConfig};
use hvdc_mc::sim::{Event, EventKind, ScenarioConfig};
use hvdc_mc::{ComplexPhasor, ExcitationParams, TheveninEstimate, TheveninEstimator};

pub fn c(re: f64, im: f64) -> ComplexPhasor {
    ComplexPhasor::new(re, im)
}

/// One of the three single-link examples: converter ratios and the two
/// source reactances, unit source voltages.
pub struct Example {
    pub hvdc: HvdcConfig,
    pub ac_r: AcSide,
    pub ac_i: AcSide,
}

pub fn example(n_r: f64, n_i: f64, x_r: f64, x_i: f64) -> Example {
    Example {
        hvdc: HvdcConfig {
            n_r,
            n_i,
            ..HvdcConfig::default()
        },
        ac_r: AcSide::new(1.0, x_r),
        ac_i: AcSide::new(1.0, x_i),
    }
}

pub fn examples() -> [Example; 3] {
    [
        example(0.5738, 0.5718, 0.2, 0.01),
        example(0.5732, 0.5718, 0.1, 0.2),
        example(0.5738, 0.5765, 0.1, 0.4),
    ]
}

/// Present DC current of the examples (600 MW at nominal voltage), kA.
pub const I_D_PRESENT: f64 = 1.2;

/// Link for the fault scenario: the monitored grid sits behind the inverter.
pub fn fault_link_hvdc() -> HvdcConfig {
    HvdcConfig {
        n_r: 0.5767,
        n_i: 0.5596,
        q_acr_rated: 260.0,
        q_aci_rated: 300.0,
        ..HvdcConfig::default()
    }
}

pub const FAULT_X: f64 = 0.235;
pub const FAULT_R: f64 = 0.005;
pub const FAULT_Z_D0: ComplexPhasor = ComplexPhasor::new(1.45, 0.35);

/// Fault at 0.2 s cleared at 0.28 s, link held at low power until it
/// recovers from 0.53 s.
pub fn fault_scenario(noise_variance: f64, seed: u64, dynamics: bool) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(
        0.8,
        AcSide {
            e_th: c(1.0, 0.0),
            x_th: FAULT_X,
            r_th: FAULT_R,
        },
        FAULT_Z_D0,
    );
    cfg.noise_variance = noise_variance;
    cfg.seed = seed;
    cfg.terminal_id = "inverter".into();
    let low = c(5.0, 1.0);
    cfg.events = vec![
        Event {
            t: 0.2,
            kind: EventKind::ImpedanceSwitch {
                z_step: c(0.05, 0.02),
                z_final: c(0.05, 0.02),
                tau: 0.0,
            },
        },
        Event {
            t: 0.28,
            kind: EventKind::ImpedanceSwitch {
                z_step: low,
                z_final: low,
                tau: 0.0,
            },
        },
        Event {
            t: 0.53,
            kind: EventKind::ImpedanceSwitch {
                z_step: low,
                z_final: FAULT_Z_D0,
                tau: 0.05,
            },
        },
    ];
    if dynamics {
        cfg.potential_dynamics = Some(ExcitationParams::default());
        // field forcing during and after the fault
        cfg.events.insert(
            1,
            Event {
                t: 0.2,
                kind: EventKind::PotentialRamp {
                    de: 0.08,
                    duration: 0.3,
                },
            },
        );
    }
    cfg
}

/// Run the estimator over a trajectory and return the estimate in force at
/// time `t_eval` (if any) together with all fresh estimates.
pub fn estimate_at(
    est: &mut TheveninEstimator,
    samples: impl IntoIterator<Item = hvdc_mc::PmuSample>,
    t_eval: f64,
) -> (Option<TheveninEstimate>, Vec<TheveninEstimate>) {
    let mut at = None;
    let mut fresh = Vec::new();
    for s in samples {
        let te = est.update(&s).expect("estimator update");
        if let Some(te) = te {
            if s.t <= t_eval + 1e-9 {
                at = Some(te);
            }
            if !te.held_over {
                fresh.push(te);
            }
        }
    }
    (at, fresh)
}
