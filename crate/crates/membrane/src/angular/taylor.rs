//! Taylor-in-`alpha` representation and the periodicity residual.
//!
//! Repeated differentiation of the equation `P'' = (2h^2 cos 2a - R) P`
//! generates the coefficients about `a = 0`. With `M = R - 2h^2`,
//!
//! ```text
//! odd:  P1/B' = a - M a^3/3! + (M^2 - 24h^2) a^5/5!
//!               - (M^3 - 104 h^2 M - 160 h^2) a^7/7! + ...
//! even: P2/D' = 1 - M a^2/2! + (M^2 - 8h^2) a^4/4!
//!               - (M^3 - 56 h^2 M - 32 h^2) a^6/6! + ...
//! ```
//!
//! Summing the series at `a = pi` yields an alternative characteristic
//! equation: the odd solution must vanish there, and the even solution must
//! return to `(-1)^g` times its initial value.

use super::AngularKind;
use crate::error::{Error, Result};

const COEFF_LIMIT: f64 = 1e240;

/// Taylor coefficients of `P` about `alpha = 0` with unit leading seed
/// (`P'(0) = 1` for the odd kind, `P(0) = 1` for the even kind).
#[derive(Debug, Clone)]
pub struct TaylorAlphaRep {
    pub kind: AngularKind,
    /// Dense coefficients of `alpha^n`; the off-parity entries are zero.
    pub coeffs: Vec<f64>,
    /// Scale linking these unit-seeded coefficients to a canonically
    /// normalized angular function (`B'` odd, `D'` even); 1 when standalone.
    pub normalization: f64,
}

impl TaylorAlphaRep {
    pub fn eval(&self, alpha: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * alpha + c;
        }
        self.normalization * acc
    }
}

/// Taylor coefficients of the potential `w(a) = 2h^2 cos 2a - R` about 0:
/// only even orders survive, `w_{2k} = 2h^2 (-4)^k / (2k)!` plus `-R` at 0.
fn potential_coeffs(h2: f64, r: f64, n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let mut term = 2.0 * h2; // 2h^2 * (-4)^k / (2k)!
    for k in 0.. {
        let idx = 2 * k;
        if idx >= n {
            break;
        }
        w[idx] = term;
        term *= -4.0 / (((idx + 1) * (idx + 2)) as f64);
    }
    if n > 0 {
        w[0] -= r;
    }
    w
}

pub(crate) fn taylor_coeffs(kind: AngularKind, h2: f64, r: f64, n: usize) -> Result<Vec<f64>> {
    let w = potential_coeffs(h2, r, n);
    let mut p = vec![0.0; n];
    match kind {
        AngularKind::Odd => {
            if n > 1 {
                p[1] = 1.0;
            }
        }
        AngularKind::Even => {
            if n > 0 {
                p[0] = 1.0;
            }
        }
    }
    for m in 0..n.saturating_sub(2) {
        let mut acc = 0.0;
        for j in 0..=m {
            acc += w[j] * p[m - j];
        }
        let next = acc / (((m + 1) * (m + 2)) as f64);
        if !next.is_finite() || next.abs() > COEFF_LIMIT {
            return Err(Error::CoefficientOverflow { magnitude: next.abs(), limit: COEFF_LIMIT });
        }
        p[m + 2] = next;
    }
    Ok(p)
}

/// Taylor representation with `n` coefficients (unit normalization).
pub fn taylor_alpha(cv: &super::CharacteristicValue, n: usize) -> Result<TaylorAlphaRep> {
    let coeffs = taylor_coeffs(cv.kind, cv.h2(), cv.r, n)?;
    Ok(TaylorAlphaRep { kind: cv.kind, coeffs, normalization: 1.0 })
}

/// Value of the Taylor series at `alpha = pi`, rearranged so that zero
/// characterizes an admissible characteristic constant:
/// odd kind `P(pi)`, even kind `P(pi) - (-1)^g P(0)` with `g` read off
/// `round(sqrt(R))`. Reports a truncation failure when the partial sums grow
/// past the point where cancellation destroys the result.
pub fn periodicity_residual(h: f64, r_trial: f64, kind: AngularKind) -> Result<f64> {
    if !(h >= 0.0) || !h.is_finite() || !r_trial.is_finite() {
        return Err(Error::InvalidInput("need finite h >= 0 and R".into()));
    }
    let pi = std::f64::consts::PI;
    // The Taylor terms at pi decay only once the index passes the peak of the
    // highest harmonic the potential feeds appreciably, which grows with h;
    // generate generously and verify the tail actually died.
    let scale = r_trial.abs().max(4.0 * h * h) + 4.0;
    let n = ((2.0 * scale.sqrt() * pi) as usize + 48).max(400);
    let coeffs = taylor_coeffs(kind, h * h, r_trial, n)?;
    let mut sum = 0.0;
    let mut max_term = 0.0f64;
    let mut pow = 1.0;
    let mut tail = 0.0f64;
    for (i, &c) in coeffs.iter().enumerate() {
        let t = c * pow;
        max_term = max_term.max(t.abs());
        sum += t;
        pow *= pi;
        if i + 12 >= n {
            tail = tail.max(t.abs());
        }
    }
    if max_term > 1e8 {
        return Err(Error::TruncationFailure(format!(
            "pi-argument summation loses precision: largest term {max_term:.3e}"
        )));
    }
    if tail > 1e-12 * max_term.max(1.0) {
        return Err(Error::TruncationFailure(format!(
            "pi-argument series not exhausted: tail terms still {tail:.3e}"
        )));
    }
    match kind {
        AngularKind::Odd => Ok(sum),
        AngularKind::Even => {
            let g_guess = r_trial.max(0.0).sqrt().round() as i64;
            let sign = if g_guess % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sum - sign)
        }
    }
}
