//! Angular Mathieu eigenproblem.
//!
//! The periodic solutions of
//!
//! ```text
//! d^2P/da^2 + (R - 2 h^2 cos 2a) P = 0,        h = lambda * c,
//! ```
//!
//! split into two kinds: the odd kind `P1` (vanishes at `a = 0`, sine-like)
//! and the even kind `P2` (extremum at `a = 0`, cosine-like). For each order
//! `g` the characteristic constant `R` (written `R'` for the odd kind) makes
//! the solution 2*pi-periodic; it reduces to `g^2` at `h = 0`.
//!
//! Solvers and representations:
//! * [`charval_series`] — truncated perturbation series in powers of `h`,
//! * [`charval_shoot`] — shooting on `[0, pi/2]` with the parity boundary rule,
//! * [`trig_series`] — harmonic expansion with unit leading coefficient,
//! * [`power_coeffs`] — power series in `nu = cos a` or `nu' = sin a`,
//! * [`taylor_alpha`] / [`periodicity_residual`] — Taylor-in-`a` machinery,
//! * [`AngularFunction`] — the assembled evaluator used everywhere else.

mod function;
mod power;
mod series;
mod shoot;
mod taylor;
mod trig;

pub use function::{angular_eval, count_roots, AngularFunction};
pub use power::{match_factor, power_coeffs, PowerParity, PowerSeriesRep, SeriesVariable};
pub use series::charval_series;
pub use shoot::{charval_shoot, charval_shoot_signed};
pub(crate) use shoot::charval_shoot_hinted;
pub use taylor::{periodicity_residual, taylor_alpha, TaylorAlphaRep};
pub use trig::{trig_series, TrigParity, TrigSeriesRep};

use crate::error::{Error, Result};

/// The two families of periodic solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngularKind {
    /// `P1`: vanishes at `a = 0`; the major axis is nodal.
    Odd,
    /// `P2`: extremum at `a = 0`; the major axis carries anti-nodes.
    Even,
}

impl AngularKind {
    pub fn is_odd(self) -> bool {
        self == AngularKind::Odd
    }

    pub fn is_even(self) -> bool {
        self == AngularKind::Even
    }

    pub(crate) fn check_order(self, g: u32) -> Result<()> {
        if self.is_odd() && g == 0 {
            return Err(Error::InvalidInput("odd kind requires order g >= 1".into()));
        }
        Ok(())
    }
}

impl std::fmt::Display for AngularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AngularKind::Odd => "odd",
            AngularKind::Even => "even",
        })
    }
}

/// Spectral parameter bundle: `h = lambda * c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub h: f64,
    /// Back-reference to the spatial eigenvalue when known.
    pub lambda: Option<f64>,
}

impl SpectralParam {
    pub fn new(h: f64) -> Result<Self> {
        if !(h >= 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("h must be >= 0, got {h}")));
        }
        Ok(Self { h, lambda: None })
    }
}

/// How a characteristic value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharvalMethod {
    Series,
    Shooting,
}

/// A characteristic constant `R` bound to its `(kind, g, h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicValue {
    pub r: f64,
    pub kind: AngularKind,
    pub order: u32,
    pub h: f64,
    pub method: CharvalMethod,
}

impl CharacteristicValue {
    /// `m = R + 2h^2`, the constant of the `nu = cos a` power-series form.
    pub fn m_plus(&self) -> f64 {
        self.r + 2.0 * self.h * self.h
    }

    /// `M = m' = R - 2h^2`, the constant of the `nu' = sin a` form and of the
    /// Taylor representations.
    pub fn m_minus(&self) -> f64 {
        self.r - 2.0 * self.h * self.h
    }

    pub fn h2(&self) -> f64 {
        self.h * self.h
    }
}
