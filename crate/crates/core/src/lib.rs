//! Thevenin-equivalent tracking and LCC-HVDC maximum emergency power
//! capacity (HVDC-MC) estimation from local synchrophasor measurements.
//!
//! The crate is organised bottom-up:
//!
//! - [`phasor`]: phasor values, PMU samples and per-unit conversion.
//! - [`te`]: measurement screening and windowed total-least-squares
//!   Thevenin estimation.
//! - [`acdc`]: steady-state converter equations, AC interface equations,
//!   operating limits and the alternating AC/DC fixed-point solve.
//! - [`mc`]: the streaming capacity engine and multi-HVDC allocation.
//! - [`sim`]: synthetic PMU trajectories with ground truth.
//! - [`io`]: CSV formats shared by the command-line front end.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acdc;
pub mod error;
pub mod io;
pub mod mc;
pub mod phasor;
pub mod sim;
pub mod te;

pub use acdc::{
    AcSide, ControlMode, DcOperatingPoint, FixedPointSolution, HvdcConfig, Side, VdcolCurve,
};
pub use error::{Error, Result};
pub use mc::{AllocationPlan, Binding, McEngine, McEngineConfig, McResult, McStep};
pub use phasor::{ComplexPhasor, PerUnitBase, PmuSample, Quantity};
pub use sim::{Event, EventKind, ScenarioConfig, TrajectoryRecord};
pub use te::{EstimatorConfig, ExcitationParams, TheveninEstimate, TheveninEstimator};
