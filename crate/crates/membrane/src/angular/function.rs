//! Assembled angular eigenfunction.
//!
//! Combines the two power-series representations into one evaluator on the
//! whole circle: the `nu'` form covers the octant `[0, 45 deg]`, the `nu`
//! form covers `[45, 90 deg]`, and the quadrant symmetries of `sin g a` /
//! `cos g a` extend the value everywhere else. The overall scale is fixed so
//! the coefficient of `cos g a` (resp. `sin g a`) equals one — the same
//! normalization as the harmonic expansion, but available at every `h`.

use super::power::{default_terms, match_factor_of, power_coeffs, PowerSeriesRep, SeriesVariable};
use super::taylor::{taylor_coeffs, TaylorAlphaRep};
use super::{AngularKind, CharacteristicValue};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre_on;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const TAU: f64 = 2.0 * PI;

/// Periodic eigenfunction `P(alpha)` with canonical (unit leading harmonic)
/// normalization.
#[derive(Debug, Clone)]
pub struct AngularFunction {
    pub cv: CharacteristicValue,
    nu: PowerSeriesRep,
    nu_prime: PowerSeriesRep,
    /// `A` with `A * (nu-series) = (nu'-series)`.
    match_factor: f64,
    /// Scale applied to the `nu'` branch; the `nu` branch carries
    /// `scale * match_factor`.
    scale: f64,
}

impl AngularFunction {
    pub fn new(cv: &CharacteristicValue) -> Result<Self> {
        let n = default_terms(cv);
        let nu = power_coeffs(cv, SeriesVariable::Nu, n)?;
        let nu_prime = power_coeffs(cv, SeriesVariable::NuPrime, n)?;
        let a = match_factor_of(&nu, &nu_prime, cv.h2())?;
        let mut f = Self { cv: *cv, nu, nu_prime, match_factor: a, scale: 1.0 };
        let c = f.leading_harmonic_coefficient();
        if !c.is_finite() || c.abs() < 1e-12 {
            return Err(Error::InvalidInput(format!(
                "degenerate leading harmonic coefficient {c:.3e}"
            )));
        }
        f.scale = 1.0 / c;
        Ok(f)
    }

    /// Fourier coefficient of the leading harmonic of the unscaled evaluator.
    fn leading_harmonic_coefficient(&self) -> f64 {
        let g = self.cv.order;
        let (nodes, weights) = gauss_legendre_on(64, 0.0, FRAC_PI_2);
        let mut acc = 0.0;
        for (&x, &w) in nodes.iter().zip(&weights) {
            let basis = match self.cv.kind {
                AngularKind::Even => (g as f64 * x).cos(),
                AngularKind::Odd => (g as f64 * x).sin(),
            };
            acc += w * self.eval(x) * basis;
        }
        // product is symmetric about pi/2, so the [0, pi] integral doubles it
        let full = 2.0 * acc;
        if g == 0 {
            full / PI
        } else {
            2.0 * full / PI
        }
    }

    pub fn match_factor(&self) -> f64 {
        self.match_factor
    }

    /// Scale of the `nu'` branch; equals `P(0)` (even kind) or `P'(0)` (odd).
    pub fn normalization(&self) -> f64 {
        self.scale
    }

    pub fn nu_series(&self) -> &PowerSeriesRep {
        &self.nu
    }

    pub fn nu_prime_series(&self) -> &PowerSeriesRep {
        &self.nu_prime
    }

    /// Fold `alpha` into `[0, pi/2]`, tracking the sign picked up from the
    /// quadrant symmetries and the direction factor for derivatives.
    fn fold(&self, alpha: f64) -> (f64, f64, f64) {
        let g = self.cv.order;
        let mut a = alpha.rem_euclid(TAU);
        let mut sign = 1.0;
        let mut dir = 1.0;
        if a > PI {
            a = TAU - a;
            dir = -dir;
            if self.cv.kind.is_odd() {
                sign = -sign;
            }
        }
        if a > FRAC_PI_2 {
            a = PI - a;
            dir = -dir;
            let mirror = match self.cv.kind {
                AngularKind::Even => {
                    if g % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                AngularKind::Odd => {
                    if g % 2 == 0 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            };
            sign *= mirror;
        }
        (a, sign, dir)
    }

    /// `P(alpha)`.
    pub fn eval(&self, alpha: f64) -> f64 {
        let (a, sign, _) = self.fold(alpha);
        sign * if a <= FRAC_PI_4 {
            self.scale * self.nu_prime.eval(a.sin())
        } else {
            self.scale * self.match_factor * self.nu.eval(a.cos())
        }
    }

    /// `dP/dalpha`.
    pub fn eval_deriv(&self, alpha: f64) -> f64 {
        let (a, sign, dir) = self.fold(alpha);
        let d = if a <= FRAC_PI_4 {
            self.scale * self.nu_prime.eval_deriv(a.sin()) * a.cos()
        } else {
            self.scale * self.match_factor * self.nu.eval_deriv(a.cos()) * (-a.sin())
        };
        sign * dir * d
    }

    /// `d^2P/dalpha^2` (chain rule through the series variable; the fold
    /// direction squares away).
    pub fn eval_deriv2(&self, alpha: f64) -> f64 {
        let (a, sign, _) = self.fold(alpha);
        let d2 = if a <= FRAC_PI_4 {
            let x = a.sin();
            let dx = a.cos();
            self.scale * (self.nu_prime.eval_deriv2(x) * dx * dx - self.nu_prime.eval_deriv(x) * x)
        } else {
            let x = a.cos();
            let dx = -a.sin();
            self.scale
                * self.match_factor
                * (self.nu.eval_deriv2(x) * dx * dx - self.nu.eval_deriv(x) * x)
        };
        sign * d2
    }

    /// All zeros of `P` in `[lo, hi)`, refined by bisection.
    pub fn roots(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !(hi > lo) {
            return out;
        }
        let samples = (64 * (self.cv.order as usize + 2)).max(512);
        let dx = (hi - lo) / samples as f64;
        let scale = self.scale.abs().max(1.0);
        // endpoint membership: lo counts, hi does not
        let v0 = self.eval(lo);
        if v0.abs() < 1e-11 * scale {
            out.push(lo);
        }
        let mut prev_x = lo;
        let mut prev_v = v0;
        for k in 1..=samples {
            let x = lo + k as f64 * dx;
            let v = self.eval(x);
            if v == 0.0 {
                // landed exactly on a zero
                if out.last().map_or(true, |&r| (x - r).abs() > 1e-9) && x < hi {
                    out.push(x);
                }
            } else if prev_v != 0.0 && prev_v.signum() != v.signum() {
                let mut a = prev_x;
                let mut b = x;
                let mut fa = prev_v;
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    let fm = self.eval(mid);
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
                    if b - a < 1e-13 {
                        break;
                    }
                }
                let root = 0.5 * (a + b);
                // skip duplicates of a recorded endpoint root
                if out.last().map_or(true, |&r| (root - r).abs() > 1e-9) && root < hi {
                    out.push(root);
                }
            }
            prev_x = x;
            prev_v = v;
        }
        out
    }

    /// Taylor-in-`alpha` representation carrying this function's scale.
    pub fn taylor_rep(&self, n: usize) -> Result<TaylorAlphaRep> {
        let coeffs = taylor_coeffs(self.cv.kind, self.cv.h2(), self.cv.r, n)?;
        Ok(TaylorAlphaRep { kind: self.cv.kind, coeffs, normalization: self.scale })
    }
}

/// `P(alpha)` for a characteristic value (builds the evaluator on the fly —
/// hold an [`AngularFunction`] for repeated evaluation).
pub fn angular_eval(cv: &CharacteristicValue, alpha: f64) -> Result<f64> {
    Ok(AngularFunction::new(cv)?.eval(alpha))
}

/// Exact number of zeros of `P` in `[lo, hi)`.
pub fn count_roots(cv: &CharacteristicValue, interval: (f64, f64)) -> Result<usize> {
    let f = AngularFunction::new(cv)?;
    Ok(f.roots(interval.0, interval.1).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{charval_shoot, CharvalMethod};

    fn exact_cv(g: u32, kind: AngularKind) -> CharacteristicValue {
        CharacteristicValue { r: (g * g) as f64, kind, order: g, h: 0.0, method: CharvalMethod::Series }
    }

    #[test]
    fn h_zero_reduces_to_trig() {
        for g in 1..=5u32 {
            let f = AngularFunction::new(&exact_cv(g, AngularKind::Even)).unwrap();
            let fo = AngularFunction::new(&exact_cv(g, AngularKind::Odd)).unwrap();
            for k in 0..40 {
                let a = k as f64 * 0.157;
                assert!(
                    (f.eval(a) - (g as f64 * a).cos()).abs() < 1e-12,
                    "even g={g} a={a}: {} vs {}",
                    f.eval(a),
                    (g as f64 * a).cos()
                );
                assert!((fo.eval(a) - (g as f64 * a).sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let cv = charval_shoot(2, AngularKind::Even, 0.8, 1e-12).unwrap();
        let f = AngularFunction::new(&cv).unwrap();
        for a in [0.2, 0.7, 1.1, 2.3, 4.0, 5.9] {
            let d = f.eval_deriv(a);
            let fd = (f.eval(a + 5e-6) - f.eval(a - 5e-6)) / 1e-5;
            assert!((d - fd).abs() < 1e-6, "a={a}: {d} vs {fd}");
        }
    }

    #[test]
    fn quadrant_symmetry_signs() {
        let cv = charval_shoot(3, AngularKind::Odd, 1.0, 1e-12).unwrap();
        let f = AngularFunction::new(&cv).unwrap();
        for a in [0.3, 0.9, 1.4] {
            // sin-type: P(pi - a) = -(-1)^g P(a) etc.; g = 3 odd
            assert!((f.eval(PI - a) - f.eval(a)).abs() < 1e-10);
            assert!((f.eval(PI + a) + f.eval(a)).abs() < 1e-10);
            assert!((f.eval(TAU - a) + f.eval(a)).abs() < 1e-10);
        }
    }

    #[test]
    fn root_count_matches_order() {
        for (g, kind, h) in [
            (4u32, AngularKind::Even, 1.5),
            (4, AngularKind::Odd, 1.5),
            (0, AngularKind::Even, 0.9),
            (1, AngularKind::Even, 0.9),
        ] {
            let cv = charval_shoot(g, kind, h, 1e-11).unwrap();
            assert_eq!(count_roots(&cv, (0.0, PI)).unwrap(), g as usize, "g={g} {kind}");
        }
    }

    #[test]
    fn small_h_matches_harmonic_expansion() {
        // P2 for g = 2 at small h: cos 2a + h^2(-cos 4a/12 + 1/4) + O(h^4)
        let h = 0.05f64;
        let cv = charval_shoot(2, AngularKind::Even, h, 1e-12).unwrap();
        let f = AngularFunction::new(&cv).unwrap();
        for a in [0.0f64, 0.4, 1.0, 1.5] {
            let lead = (2.0 * a).cos() + h * h * (-(4.0 * a).cos() / 12.0 + 0.25);
            assert!((f.eval(a) - lead).abs() < 5.0 * h.powi(4), "a={a}");
        }
    }
}
