//! Two-point and windowed total-least-squares impedance fits.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::phasor::{ComplexPhasor, PmuSample};

/// Smallest `|U22|` accepted before the TLS problem is declared nongeneric.
pub const NONGENERIC_TOL: f64 = 1e-10;

/// Impedance seen from `-dI Z = dV` with the potential change ignored.
///
/// Returns `(x, r)`; the potential change contributes an error of at most
/// `|dE| / |dI|` to each component.
pub fn two_point_impedance(dv: ComplexPhasor, di: ComplexPhasor) -> Result<(f64, f64)> {
    let den = di.norm_sqr();
    if !(den > 0.0) {
        return Err(Error::DegenerateCurrentChange);
    }
    let x = (dv.re * di.im - dv.im * di.re) / den;
    let r = -(dv.re * di.re + dv.im * di.im) / den;
    Ok((x, r))
}

/// One admitted sample pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionPair {
    pub dv: ComplexPhasor,
    pub di: ComplexPhasor,
}

/// The most recent `capacity` admitted pairs, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionWindow {
    pairs: VecDeque<RegressionPair>,
    capacity: usize,
}

impl RegressionWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity < 2 {
            return Err(Error::invalid("k", "window must hold at least two pairs"));
        }
        Ok(RegressionWindow {
            pairs: VecDeque::with_capacity(capacity),
            capacity,
        })
    }

    pub fn push(&mut self, pair: RegressionPair) {
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back(pair);
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &RegressionPair> {
        self.pairs.iter()
    }

    pub fn clear(&mut self) {
        self.pairs.clear();
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsSolution {
    pub r: f64,
    pub x: f64,
    /// Last component of the right singular vector of the smallest
    /// singular value.
    pub u22: f64,
    /// Singular values of `[A B]`, descending.
    pub singular_values: [f64; 3],
}

/// Stack `A = -[dI blocks]`, `B = [dV blocks]` and solve `A (r, x)' ~ B` in
/// the total-least-squares sense through the SVD of `[A B]`.
pub fn tls_solve<'a>(pairs: impl IntoIterator<Item = &'a RegressionPair>) -> Result<TlsSolution> {
    let pairs: Vec<&RegressionPair> = pairs.into_iter().collect();
    if pairs.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            have: pairs.len(),
        });
    }
    // Each block of A is a scaled rotation, so A'A = sum |dI|^2 * I and A
    // loses rank only when every current change vanishes.
    let energy: f64 = pairs.iter().map(|p| p.di.norm_sqr()).sum();
    if !(energy > f64::MIN_POSITIVE) {
        return Err(Error::RankDeficient);
    }

    let rows = 2 * pairs.len();
    let mut m = DMatrix::<f64>::zeros(rows, 3);
    for (k, p) in pairs.iter().enumerate() {
        let (a, b) = (p.di.re, p.di.im);
        m[(2 * k, 0)] = -a;
        m[(2 * k, 1)] = b;
        m[(2 * k, 2)] = p.dv.re;
        m[(2 * k + 1, 0)] = -b;
        m[(2 * k + 1, 1)] = -a;
        m[(2 * k + 1, 2)] = p.dv.im;
    }

    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::RankDeficient)?;
    let sv = svd.singular_values;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let smallest = order[2];
    let v = v_t.row(smallest);
    let u22 = v[2];
    if u22.abs() < NONGENERIC_TOL {
        return Err(Error::NongenericTls(u22));
    }
    Ok(TlsSolution {
        r: -v[0] / u22,
        x: -v[1] / u22,
        u22,
        singular_values: [sv[order[0]], sv[order[1]], sv[order[2]]],
    })
}

/// TLS fit over a regression window, returning `(r, x)`.
pub fn tls_update(window: &RegressionWindow) -> Result<(f64, f64)> {
    let s = tls_solve(window.iter())?;
    Ok((s.r, s.x))
}

/// `E = V + I (r + jx)`.
pub fn potential_from_estimate(r: f64, x: f64, sample: &PmuSample) -> ComplexPhasor {
    sample.v + sample.i * ComplexPhasor::new(r, x)
}
