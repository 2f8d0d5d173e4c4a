//! Thevenin-equivalent estimation at a converter terminal.
//!
//! Consecutive PMU samples are differenced, screened with an adaptive
//! current-change threshold, gated on a physically plausible two-point
//! solution, and the surviving pairs feed a sliding-window total least
//! squares fit of the source impedance. The source potential follows from
//! the latest sample and the impedance.

mod estimator;
mod excitation;
mod screening;
mod tls;

pub use estimator::{EstimatorConfig, TheveninEstimate, TheveninEstimator};
pub use excitation::{
    max_potential_rate, multimachine_bound_check, potential_increment, screening_floor,
    ExcitationParams, PotentialRate,
};
pub use screening::{adaptive_threshold, ScreeningState};
pub use tls::{
    potential_from_estimate, tls_solve, tls_update, two_point_impedance, RegressionPair,
    RegressionWindow, TlsSolution,
};
