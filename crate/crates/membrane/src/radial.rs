//! Radial (modified) Mathieu functions and the confocal annulus.
//!
//! The radial equation
//!
//! ```text
//! d^2Q/db^2 = [R - 2 h^2 cosh(2b)] Q = T(b) Q
//! ```
//!
//! shares `R` with the angular problem; `Q1` (odd kind) vanishes on the
//! inter-focal segment, `Q2` (even kind) has zero slope there. Three
//! representations cover the membrane:
//!
//! * Taylor about `b = 0`, generated by repeated differentiation of the
//!   equation — with `M = R - 2h^2`,
//!   `Q1/B = b + M b^3/3! + (M^2 - 24h^2) b^5/5! + ...`,
//!   `Q2/D = 1 + M b^2/2! + (M^2 - 8h^2) b^4/4! + ...`;
//! * the `rho'` power series — the `nu'` angular series continued through
//!   `nu' -> i sinh(b)`, convergent while `rho' = c sinh b < c`;
//! * stepping integration of the equation itself, valid everywhere.
//!
//! For `rho' > c` the substitution `z = c e^b / 2` brings the equation within
//! `c^4/(16 z^4) < 0.0306` of the circular-membrane form, giving the labeled
//! Bessel-style approximation `approx_bessel_form` with non-integer index
//! `n = sqrt(R)`; it never feeds the eigenvalue search.

use crate::angular::{
    power_coeffs, AngularFunction, AngularKind, CharacteristicValue, PowerSeriesRep,
    SeriesVariable,
};
use crate::error::{Error, Result};
use crate::ode::{self, AnnulusCoefficient, Checkpoints, RadialCoefficient};

const COEFF_LIMIT: f64 = 1e240;

/// Hand-off between the Taylor-in-`b` and `rho'` series: `sinh(b) = 0.8`.
const BETA_SWITCH_SINH: f64 = 0.8;

/// Upper end of the `rho'` series trust region (`sinh(b) < 1` is the
/// convergence disc; stay clear of its edge).
const RHO_SERIES_MAX_SINH: f64 = 0.95;

/// Taylor coefficients of a radial-type solution about the inner point.
#[derive(Debug, Clone)]
pub struct RadialTaylor {
    /// Coefficient of `b^n` (or `eps^n` for the annulus) at index `n`.
    pub coeffs: Vec<f64>,
    /// Seed scale: `Q'(0)` for the odd kind, `Q(0)` for the even kind.
    pub normalization: f64,
    /// `A0 = T(0)`: `R - 2h^2` for the membrane.
    pub a0: f64,
    /// Higher even derivatives of the potential at 0: `A_{2i} = -2^{2i+1} h^2`.
    pub a2i: Vec<f64>,
}

impl RadialTaylor {
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * self.normalization
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (n, &c) in self.coeffs.iter().enumerate().rev() {
            if n == 0 {
                break;
            }
            acc = acc * x + n as f64 * c;
        }
        acc * self.normalization
    }
}

/// Value/derivative pair of a radial function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialValue {
    pub q: f64,
    pub dq_dbeta: f64,
}

fn generate_taylor(
    w0: f64,
    w_rest: impl Fn(usize) -> f64,
    init: (f64, f64),
    n: usize,
) -> Result<Vec<f64>> {
    let mut w = vec![0.0; n];
    if n > 0 {
        w[0] = w0;
    }
    for (j, slot) in w.iter_mut().enumerate().skip(1) {
        *slot = w_rest(j);
    }
    let mut q = vec![0.0; n];
    if n > 0 {
        q[0] = init.0;
    }
    if n > 1 {
        q[1] = init.1;
    }
    for m in 0..n.saturating_sub(2) {
        let mut acc = 0.0;
        for j in 0..=m {
            acc += w[j] * q[m - j];
        }
        let next = acc / (((m + 1) * (m + 2)) as f64);
        if !next.is_finite() || next.abs() > COEFF_LIMIT {
            return Err(Error::CoefficientOverflow { magnitude: next.abs(), limit: COEFF_LIMIT });
        }
        q[m + 2] = next;
    }
    Ok(q)
}

/// Taylor coefficients of `Q` about `b = 0` (unit seed).
///
/// `T(b) = R - h^2(e^{2b} + e^{-2b})` has only even derivatives at 0:
/// `T(0) = M` and `d^{2i}T/db^{2i}|_0 = -2^{2i+1} h^2`.
pub fn radial_taylor_coeffs(cv: &CharacteristicValue, n: usize) -> Result<RadialTaylor> {
    let h2 = cv.h2();
    let w0 = cv.m_minus();
    let w_rest = |j: usize| {
        if j % 2 == 1 {
            0.0
        } else {
            // -2^{j+1} h^2 / j!
            let mut v = -2.0 * h2;
            for k in 1..=j {
                v *= 2.0 / k as f64;
            }
            v
        }
    };
    let init = match cv.kind {
        AngularKind::Odd => (0.0, 1.0),
        AngularKind::Even => (1.0, 0.0),
    };
    let coeffs = generate_taylor(w0, w_rest, init, n)?;
    let a2i = (1..=n / 2)
        .map(|i| -(2.0f64.powi(2 * i as i32 + 1)) * h2)
        .collect();
    Ok(RadialTaylor { coeffs, normalization: 1.0, a0: w0, a2i })
}

/// The radial eigenfunction assembled for one characteristic value, carrying
/// the normalization inherited from the angular function (`Q` is the analytic
/// continuation of `P` through `alpha -> beta i`).
pub struct RadialFunction {
    pub cv: CharacteristicValue,
    taylor: RadialTaylor,
    /// `nu'` angular series; continuation flips the sign of every other term.
    nu_prime: PowerSeriesRep,
    scale: f64,
    checkpoints: Checkpoints<RadialCoefficient>,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction")
            .field("cv", &self.cv)
            .field("scale", &self.scale)
            .finish()
    }
}

impl RadialFunction {
    /// `beta_max` bounds the region the stepping representation covers
    /// (typically the boundary parameter).
    pub fn new(cv: &CharacteristicValue, scale: f64, beta_max: f64) -> Result<Self> {
        if !(beta_max > 0.0) || !beta_max.is_finite() {
            return Err(Error::InvalidInput(format!("beta_max must be positive, got {beta_max}")));
        }
        let n_taylor = taylor_len(cv, beta_max);
        let taylor = radial_taylor_coeffs(cv, n_taylor)?;
        // the continued series is used up to sinh(b) ~ 0.95 where the term
        // ratio is ~0.9; 420 terms push the tail below 1e-16
        let nu_prime = power_coeffs(cv, SeriesVariable::NuPrime, 420)?;
        let init = match cv.kind {
            AngularKind::Odd => (0.0, scale),
            AngularKind::Even => (scale, 0.0),
        };
        let coeff = RadialCoefficient { h2: cv.h2(), r: cv.r };
        let steps = ((beta_max * 512.0).ceil() as usize).clamp(256, 4096);
        let checkpoints = Checkpoints::build(coeff, 0.0, init, beta_max * 1.0625, steps);
        Ok(Self { cv: *cv, taylor, nu_prime, scale, checkpoints })
    }

    /// Build from the angular companion, inheriting its normalization.
    pub fn from_angular(angular: &AngularFunction, beta_max: f64) -> Result<Self> {
        Self::new(&angular.cv, angular.normalization(), beta_max)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Largest `|Q|` over the built range — the boundary-residual scale.
    pub fn max_abs(&self) -> f64 {
        self.checkpoints.max_abs()
    }

    /// Taylor-in-`b` value (valid for small `b`).
    pub fn eval_taylor(&self, beta: f64) -> RadialValue {
        RadialValue {
            q: self.scale * self.taylor.eval(beta),
            dq_dbeta: self.scale * self.taylor.eval_deriv(beta),
        }
    }

    /// `rho'`-series value: the continued `nu'` series in `rho'/c = sinh(b)`,
    /// alternating signs. Requires `sinh(b) < 1`.
    pub fn eval_rho_series(&self, beta: f64) -> Result<RadialValue> {
        let u = beta.sinh();
        if u >= 1.0 {
            return Err(Error::NoRadialRepresentation {
                beta,
                detail: format!("rho' series diverges at sinh(b) = {u:.3} >= 1"),
            });
        }
        // truncation-tail bound: geometric from the last retained term
        let last = self.nu_prime.coeffs.last().copied().unwrap_or(0.0);
        let n_last = self.nu_prime.coeffs.len() - 1;
        let tail = last.abs() * u.powi(2 * n_last as i32) / (1.0 - u * u);
        if tail > 1e-11 {
            return Err(Error::TruncationFailure(format!(
                "rho' series tail {tail:.3e} at sinh(b) = {u:.3}"
            )));
        }
        // continuation x -> i u maps x^2 -> -u^2: evaluate with negated square.
        let (q, dq_du) = eval_alternating(&self.nu_prime, u);
        Ok(RadialValue {
            q: self.scale * q,
            dq_dbeta: self.scale * dq_du * beta.cosh(),
        })
    }

    /// Stepping-integration value (valid on the whole built range).
    pub fn eval_ode(&self, beta: f64) -> RadialValue {
        let (q, dq) = self.checkpoints.eval(beta);
        RadialValue { q, dq_dbeta: dq }
    }

    /// Best representation for the given `b`: Taylor inside the hand-off,
    /// `rho'` series while convergent, stepping beyond.
    pub fn eval(&self, beta: f64) -> Result<RadialValue> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidInput(format!("beta must be >= 0, got {beta}")));
        }
        let sh = beta.sinh();
        if sh <= BETA_SWITCH_SINH {
            Ok(self.eval_taylor(beta))
        } else if sh <= RHO_SERIES_MAX_SINH {
            self.eval_rho_series(beta)
        } else if beta <= self.checkpoints.x_max() {
            Ok(self.eval_ode(beta))
        } else {
            Err(Error::NoRadialRepresentation {
                beta,
                detail: format!(
                    "beyond the built stepping range ({:.3}); rebuild with a larger beta_max",
                    self.checkpoints.x_max()
                ),
            })
        }
    }

    /// All zeros of `Q` in the open interval `(0, beta_hi)`.
    pub fn roots(&self, beta_hi: f64) -> Vec<f64> {
        roots_by_scan(|b| self.eval_ode(b).q, beta_hi)
    }
}

fn taylor_len(cv: &CharacteristicValue, beta_max: f64) -> usize {
    let t_scale = cv.r.abs().max(2.0 * cv.h2() * (2.0 * beta_max.min(1.2)).cosh()) + 4.0;
    ((2.0 * t_scale.sqrt() * beta_max.min(1.2)) as usize + 40).min(220)
}

/// Evaluate an even/odd series with its argument continued to the imaginary
/// axis (`x -> i u`): signs alternate on the squared variable. Returns the
/// value and its derivative with respect to `u`.
fn eval_alternating(rep: &PowerSeriesRep, u: f64) -> (f64, f64) {
    use crate::angular::PowerParity;
    let m = -(u * u);
    let mut v = 0.0;
    for &c in rep.coeffs.iter().rev() {
        v = v * m + c;
    }
    match rep.parity {
        // sum c_s (i u)^{2s} = sum c_s (-1)^s u^{2s}
        PowerParity::Even => (v, dv_even(rep, u)),
        // -i * sum c_s (i u)^{2s+1} = sum c_s (-1)^s u^{2s+1}
        PowerParity::Odd => (v * u, dv_odd(rep, u)),
    }
}

fn sign_pow(s: usize) -> f64 {
    if s % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn dv_even(rep: &PowerSeriesRep, u: f64) -> f64 {
    // d/du sum c_s (-1)^s u^{2s} = u * sum_{s>=1} 2s c_s (-1)^s u^{2s-2}
    let u2 = u * u;
    let mut d = 0.0;
    let mut pw = 1.0;
    for (s, &c) in rep.coeffs.iter().enumerate() {
        if s >= 1 {
            d += (2 * s) as f64 * c * sign_pow(s) * pw;
            pw *= u2;
        }
    }
    d * u
}

fn dv_odd(rep: &PowerSeriesRep, u: f64) -> f64 {
    // d/du sum c_s (-1)^s u^{2s+1} = sum (2s+1) c_s (-1)^s (u^2)^s
    let u2 = u * u;
    let mut d = 0.0;
    let mut pw = 1.0;
    for (s, &c) in rep.coeffs.iter().enumerate() {
        d += (2 * s + 1) as f64 * c * sign_pow(s) * pw;
        pw *= u2;
    }
    d
}

fn roots_by_scan(f: impl Fn(f64) -> f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(hi > 0.0) {
        return out;
    }
    // stay clear of the endpoints: at an eigenvalue the boundary itself is a
    // zero whose sign is numerical noise, and interior zeros keep a finite
    // distance from it
    let hi = hi * (1.0 - 1e-6);
    let samples = 1024usize;
    let dx = hi / samples as f64;
    let mut prev_x = 0.5 * dx * 1e-6; // stay off the structural zero at 0
    let mut prev_v = f(prev_x);
    for k in 1..=samples {
        let x = k as f64 * dx;
        let v = f(x);
        if v == 0.0 {
            if out.last().map_or(true, |&r| (x - r).abs() > 1e-9) && x > 1e-9 && x < hi {
                out.push(x);
            }
        } else if prev_v != 0.0 && prev_v.signum() != v.signum() {
            let (mut a, mut b, mut fa) = (prev_x, x, prev_v);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if b - a < 1e-12 {
                    break;
                }
            }
            let root = 0.5 * (a + b);
            if root > 1e-9 && root < hi {
                out.push(root);
            }
        }
        prev_x = x;
        prev_v = v;
    }
    out
}

/// Value/derivative at one point through the representation split; see
/// [`RadialFunction::eval`]. The geometry's boundary parameter sizes the
/// stepping range. Hold a [`RadialFunction`] for repeated evaluation.
pub fn radial_eval(
    cv: &CharacteristicValue,
    beta: f64,
    geometry: &crate::coords::EllipseGeometry,
) -> Result<RadialValue> {
    let f = RadialFunction::new(cv, 1.0, geometry.theta.max(beta) + 0.25)?;
    f.eval(beta)
}

/// Exact `lambda = 0` radial solution in terms of `rho'` (distance semi-minor
/// axis of the confocal ellipse through the point):
///
/// ```text
/// odd:  (rho' + sqrt(rho'^2 + c^2))^g - c^{2g} (rho' + sqrt(rho'^2 + c^2))^{-g}
/// even: (rho' + sqrt(rho'^2 + c^2))^g + c^{2g} (rho' + sqrt(rho'^2 + c^2))^{-g}
/// ```
pub fn radial_static(g: u32, kind: AngularKind, c: f64, rho_prime: f64) -> Result<f64> {
    kind.check_order(g)?;
    if !(c > 0.0) || !(rho_prime >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need c > 0 and rho' >= 0, got c = {c}, rho' = {rho_prime}"
        )));
    }
    let w = rho_prime + (rho_prime * rho_prime + c * c).sqrt();
    let wg = w.powi(g as i32);
    let cg = c.powi(2 * g as i32);
    Ok(match kind {
        AngularKind::Odd => wg - cg / wg,
        AngularKind::Even => wg + cg / wg,
    })
}

/// Same closed form through the semi-major coordinate `rho >= c`.
pub fn radial_static_major(g: u32, kind: AngularKind, c: f64, rho: f64) -> Result<f64> {
    if rho < c {
        return Err(Error::InvalidInput(format!(
            "rho = {rho} < c = {c}: the major-axis form needs rho >= c"
        )));
    }
    let rho_prime = (rho * rho - c * c).sqrt();
    radial_static(g, kind, c, rho_prime)
}

/// Labeled large-argument approximation: the Bessel-form ascending series in
/// `z = c e^b / 2` with non-integer index `n = sqrt(R)`, normalized to unit
/// leading coefficient. The neglected factor is below `c^4/(16 z^4) < 0.0306`
/// whenever `rho' > c`.
pub fn approx_bessel_form(cv: &CharacteristicValue, beta: f64, c: f64, lambda: f64) -> f64 {
    let z = 0.5 * c * beta.exp();
    let n = cv.r.max(0.0).sqrt();
    let x = lambda * z;
    // z^n * sum_k (-1)^k x^{2k} / (k! (n+1)...(n+k))
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= -(x * x) / (k as f64 * (n + k as f64));
        sum += term;
        if term.abs() < 1e-16 * sum.abs().max(1.0) {
            break;
        }
    }
    z.powf(n) * sum
}

// ---------------------------------------------------------------------------
// Confocal annulus
// ---------------------------------------------------------------------------

/// Shifted-coordinate parameters for the membrane between two confocal
/// ellipses: `eps = b - theta_inner` vanishes on the inner contour, and with
/// `a = rho_in/2 + sqrt(rho_in^2 - c^2)/2` the scale factors are
/// `q = c^2/(4a^2)` and `f = 2 lambda a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusParam {
    pub a: f64,
    pub q_ann: f64,
    pub f: f64,
    /// `eps = beta - eps0`; `eps0 = theta_inner = log(2a/c)`.
    pub eps0: f64,
}

/// Annulus parameters from the inner-contour parameter. `q_ann = 1` is the
/// full membrane (inner contour collapsed onto the inter-focal segment) and
/// `q_ann -> 0` the circular ring.
pub fn annulus_from_geometry(c: f64, theta_inner: f64, lambda: f64) -> Result<AnnulusParam> {
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("need c > 0, got {c}")));
    }
    if !(theta_inner > 0.0) {
        return Err(Error::InvalidInput(
            "degenerate inner contour (theta_inner = 0): use the full-membrane path".into(),
        ));
    }
    let a = 0.5 * c * theta_inner.exp();
    Ok(AnnulusParam {
        a,
        q_ann: (-2.0 * theta_inner).exp(),
        f: 2.0 * lambda * a,
        eps0: theta_inner,
    })
}

/// Taylor coefficients in `eps` of the annulus solution vanishing on the
/// inner contour, generated from `d^2Q/deps^2 = [R - f^2(e^{2 eps} + q e^{-2 eps})] Q`
/// (the derivative-table form; `q` is the table's parameter).
pub fn annulus_taylor(f: f64, q_ann: f64, r: f64, n: usize) -> Result<RadialTaylor> {
    if !(0.0..=1.0).contains(&q_ann) {
        return Err(Error::InvalidInput(format!("q must lie in [0, 1], got {q_ann}")));
    }
    let f2 = f * f;
    let w0 = r - f2 * (1.0 + q_ann);
    let w_rest = |j: usize| {
        // -f^2 (2^j + (-2)^j q) / j!
        let mut p = 1.0;
        let mut fact = 1.0;
        for k in 1..=j {
            p *= 2.0;
            fact *= k as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        -f2 * (p + sign * p * q_ann) / fact
    };
    let coeffs = generate_taylor(w0, w_rest, (0.0, 1.0), n)?;
    let a2i = (1..=n / 2).map(|i| {
        let j = 2 * i;
        let p = 2.0f64.powi(j as i32);
        -f2 * (p + p * q_ann)
    }).collect();
    Ok(RadialTaylor { coeffs, normalization: 1.0, a0: w0, a2i })
}

/// Stepping coefficient for the physically exact annulus equation: the
/// decaying exponential carries `q^2`, the square of the table's parameter.
pub(crate) fn annulus_ode_coefficient(f: f64, q_ann: f64, r: f64) -> AnnulusCoefficient {
    AnnulusCoefficient { f2: f * f, weight: q_ann * q_ann, r }
}

/// Boundary value of the annulus solution at `eps_outer` (unit inner slope),
/// integrating the exact equation; also returns the max amplitude for
/// residual scaling.
pub(crate) fn annulus_boundary_value(
    f: f64,
    q_ann: f64,
    r: f64,
    eps_outer: f64,
    steps: usize,
) -> (f64, f64) {
    let coeff = annulus_ode_coefficient(f, q_ann, r);
    let mut max_abs = 0.0f64;
    let (q_end, _) = ode::integrate_observed(&coeff, 0.0, (0.0, 1.0), eps_outer, steps, |_, q, _| {
        max_abs = max_abs.max(q.abs());
    });
    (q_end, max_abs)
}

/// Zeros of the annulus solution strictly inside `(0, eps_outer)`.
pub(crate) fn annulus_interior_roots(f: f64, q_ann: f64, r: f64, eps_outer: f64) -> Vec<f64> {
    let coeff = annulus_ode_coefficient(f, q_ann, r);
    let steps = 1024;
    let cps = Checkpoints::build(coeff, 0.0, (0.0, 1.0), eps_outer, steps);
    roots_by_scan(|x| cps.eval(x).0, eps_outer)
}
