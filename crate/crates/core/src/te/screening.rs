//! Adaptive current-change screening.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trigger state of the adaptive threshold.
///
/// The first pair with `|dI| > coeff |I|` fires the trigger at index `n0`;
/// afterwards a pair is admitted when `|dI|` exceeds
/// `coeff |I| (1 - lambda^(n - n0))`, which restarts at zero on every new
/// trigger and rises back towards `coeff |I|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningState {
    pub n0: u64,
    pub lambda: f64,
    pub coeff: f64,
    pub triggered: bool,
}

impl ScreeningState {
    pub fn new(lambda: f64, coeff: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid(
                "lambda",
                format!("must lie in (0, 1), got {lambda}"),
            ));
        }
        if !(coeff > 0.0 && coeff.is_finite()) {
            return Err(Error::invalid(
                "coeff",
                format!("must be positive, got {coeff}"),
            ));
        }
        Ok(ScreeningState {
            n0: 0,
            lambda,
            coeff,
            triggered: false,
        })
    }

    /// Update the trigger with pair `n` and report whether it is admitted.
    pub fn screen_pair(&mut self, n: u64, di_mag: f64, i_mag: f64) -> bool {
        if di_mag > self.coeff * i_mag {
            self.n0 = n;
            self.triggered = true;
        }
        if !self.triggered {
            return false;
        }
        // n >= n0 always holds once triggered
        di_mag > adaptive_threshold(self, n, i_mag).unwrap_or(f64::INFINITY)
    }
}

pub fn adaptive_threshold(state: &ScreeningState, n: u64, i_mag: f64) -> Result<f64> {
    if !state.triggered {
        return Err(Error::NotTriggered);
    }
    if n < state.n0 {
        return Err(Error::invalid("n", "precedes the trigger index"));
    }
    let steps = (n - state.n0) as i32;
    Ok(state.coeff * i_mag * (1.0 - state.lambda.powi(steps)))
}
