//! Emergency capacity: the streaming engine, the current sweep behind it and
//! shortage allocation across links.

mod allocate;
mod engine;
mod sweep;

use serde::{Deserialize, Serialize};

pub use allocate::{allocate, AllocationEntry, AllocationPlan};
pub use engine::{McEngine, McEngineConfig, McStep};
pub use sweep::{capacity_sweep, violation, SweepConfig, SweepOutcome};

use crate::acdc::DcOperatingPoint;
use crate::te::TheveninEstimate;

/// What stopped the capacity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    AlphaMin,
    Vdcol,
    ConverterRating,
    EMin,
    EMax,
    PowerRollover,
    Infeasible,
}

impl Binding {
    pub fn as_str(&self) -> &'static str {
        match self {
            Binding::AlphaMin => "alpha_min",
            Binding::Vdcol => "vdcol",
            Binding::ConverterRating => "converter_rating",
            Binding::EMin => "e_min",
            Binding::EMax => "e_max",
            Binding::PowerRollover => "power_rollover",
            Binding::Infeasible => "infeasible",
        }
    }
}

impl std::fmt::Display for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Binding {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        [
            Binding::AlphaMin,
            Binding::Vdcol,
            Binding::ConverterRating,
            Binding::EMin,
            Binding::EMax,
            Binding::PowerRollover,
            Binding::Infeasible,
        ]
        .into_iter()
        .find(|b| b.as_str() == s)
        .ok_or_else(|| crate::Error::invalid("binding", format!("unknown binding `{s}`")))
    }
}

/// Capacity estimate at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub t: f64,
    /// MW on the reporting side.
    pub mc_power: f64,
    pub binding: Binding,
    /// DC current at the capacity point, kA.
    pub i_d_at_mc: f64,
    /// Feasible points in order of increasing current.
    pub sweep: Vec<DcOperatingPoint>,
    pub te: Option<TheveninEstimate>,
    /// The non-reporting side peaked before the sweep stopped.
    pub other_side_rollover: bool,
}
