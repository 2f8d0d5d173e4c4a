//! AC interface between a Thevenin source and a converter bus.

use super::Side;
use crate::error::{Error, Result};

/// Upper-branch converter bus voltage magnitude, p.u.
///
/// `p_a`, `q_a` are the AC-line flows in per-unit: into the rectifier bus
/// from its source, out of the inverter bus towards its source.
pub fn ac_voltage_solve(e_th: f64, x_th: f64, p_a: f64, q_a: f64, side: Side) -> Result<f64> {
    let a = match side {
        Side::Rectifier => e_th * e_th - 2.0 * q_a * x_th,
        Side::Inverter => e_th * e_th + 2.0 * q_a * x_th,
    };
    let m = a * a - 4.0 * x_th * x_th * (p_a * p_a + q_a * q_a);
    if !(m >= 0.0) {
        return Err(Error::VoltageCollapse(m));
    }
    let e_sq = 0.5 * (a + m.sqrt());
    if !(e_sq >= 0.0) {
        return Err(Error::VoltageCollapse(m));
    }
    Ok(e_sq.sqrt())
}

/// Output of a fixed-reactance compensator at bus voltage `e_d` (p.u.),
/// Mvar, given its rating at 1.0 p.u.
pub fn compensator_q(e_d: f64, q_rated: f64) -> f64 {
    q_rated * e_d * e_d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasor::ComplexPhasor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn open_circuit_returns_source_voltage() {
        for side in [Side::Rectifier, Side::Inverter] {
            assert!((ac_voltage_solve(1.03, 0.2, 0.0, 0.0, side).unwrap() - 1.03).abs() < 1e-15);
        }
    }

    /// Phasor oracle: pick the bus voltage, derive the line flows from
    /// `E - jX I = V`, then ask the closed form to recover `|V|`.
    #[test]
    fn agrees_with_phasor_circuit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let j = ComplexPhasor::i();
        let mut checked = 0;
        while checked < 1000 {
            let e = rng.random_range(0.8..1.2);
            let x = rng.random_range(0.01..0.5);
            let v =
                ComplexPhasor::from_polar(rng.random_range(0.6..1.2), rng.random_range(-0.8..0.8));
            let src = ComplexPhasor::new(e, 0.0);
            let i_in = (src - v) / (j * x);
            let s_in = v * i_in.conj();
            for (side, s) in [(Side::Rectifier, s_in), (Side::Inverter, -s_in)] {
                let a = match side {
                    Side::Rectifier => e * e - 2.0 * s.im * x,
                    Side::Inverter => e * e + 2.0 * s.im * x,
                };
                // only the upper branch is reachable
                if v.norm_sqr() < 0.5 * a {
                    continue;
                }
                let got = ac_voltage_solve(e, x, s.re, s.im, side).unwrap();
                assert!(
                    (got - v.norm()).abs() < 1e-9,
                    "{side}: {got} vs {}",
                    v.norm()
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn excessive_load_collapses() {
        let err = ac_voltage_solve(1.0, 0.5, 2.0, 0.0, Side::Rectifier).unwrap_err();
        assert!(matches!(err, Error::VoltageCollapse(m) if m < 0.0));
    }

    #[test]
    fn compensator_scales_with_voltage_squared() {
        assert_eq!(compensator_q(1.0, 300.0), 300.0);
        assert!((compensator_q(0.9, 300.0) - 243.0).abs() < 1e-12);
        assert_eq!(compensator_q(0.0, 300.0), 0.0);
    }
}
