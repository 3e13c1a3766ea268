//! Shooting solver for the characteristic constant.
//!
//! Integrate the angular equation across `[0, pi/2]` from the kind's initial
//! data (`P(0) = 0, P'(0) = 1` odd; `P(0) = 1, P'(0) = 0` even) and enforce
//! the boundary rule at `pi/2`: the solution is zero there when `sin(g a)` /
//! `cos(g a)` vanishes there, and has zero slope otherwise. Among the roots of
//! that residual, the characteristic branch is the one whose solution has
//! exactly `g` zeros in `[0, pi)`.
//!
//! The refinement always runs from a canonical bracket — the residual
//! sign-change cell on a fixed `R` grid — so the converged value depends only
//! on `(kind, g, h)`, not on how the search was seeded.

use super::series::charval_series;
use super::{AngularKind, CharacteristicValue, CharvalMethod};
use crate::error::{Error, Result};
use crate::ode::{integrate_observed, AngularCoefficient};

/// Fixed integrator resolution: step pi/2048 across the quarter period.
const STEPS: usize = 1024;

/// Width of the canonical bracketing cells on the `R` axis.
const CELL: f64 = 0.0625;

struct Shot {
    residual: f64,
    interior_sign_changes: usize,
    max_abs: f64,
}

fn bc_is_value(g: u32, kind: AngularKind) -> bool {
    match kind {
        AngularKind::Even => g % 2 == 1,
        AngularKind::Odd => g % 2 == 0,
    }
}

fn shoot(g: u32, kind: AngularKind, h: f64, r: f64, potential_sign: f64) -> Shot {
    let coeff = AngularCoefficient { h2: h * h, r, potential_sign };
    let init: (f64, f64) = match kind {
        AngularKind::Odd => (0.0, 1.0),
        AngularKind::Even => (1.0, 0.0),
    };
    let mut changes = 0usize;
    let mut max_abs: f64 = init.0.abs();
    let mut prev = init.0;
    let mut seen = 0usize;
    let (p_end, dp_end) = integrate_observed(
        &coeff,
        0.0,
        init,
        std::f64::consts::FRAC_PI_2,
        STEPS,
        |_, p, _| {
            seen += 1;
            max_abs = max_abs.max(p.abs());
            // interior samples only: skip the starting value (may be an exact
            // zero for the odd kind) and the endpoint at pi/2
            if seen < STEPS {
                if prev != 0.0 && p != 0.0 && prev.signum() != p.signum() {
                    changes += 1;
                }
                if seen == 1 && init.0 == 0.0 {
                    // first interval: compare against the launch slope sign
                    if p.signum() != init.1.signum() {
                        changes += 1;
                    }
                }
                prev = p;
            }
        },
    );
    let residual = if bc_is_value(g, kind) { p_end } else { dp_end };
    Shot { residual, interior_sign_changes: changes, max_abs }
}

fn zero_count(g: u32, kind: AngularKind, shot: &Shot) -> usize {
    let endpoint0 = usize::from(kind.is_odd());
    let endpoint_half = usize::from(bc_is_value(g, kind));
    endpoint0 + 2 * shot.interior_sign_changes + endpoint_half
}

/// Cells per coarse probe: 32 cells = 2.0 on the `R` axis, safely below the
/// minimal spacing between roots of one boundary-rule family.
const PROBE_CELLS: i64 = 32;

/// Search outward from the seed for a residual sign change, narrow it to its
/// canonical cell, and refine; roots with the wrong zero count are skipped.
fn solve_from_seed(
    g: u32,
    kind: AngularKind,
    h: f64,
    seed: f64,
    potential_sign: f64,
    tol: f64,
) -> Result<f64> {
    let res = |r: f64| shoot(g, kind, h, r, potential_sign).residual;
    let scan_lo = (g * g) as f64 - 4.0 * h * h - 1.0 - CELL;
    let scan_hi = (g * g) as f64 + 4.0 * h * h + 5.0 + CELL;
    let max_probe = (((scan_hi - scan_lo) / (PROBE_CELLS as f64 * CELL)).ceil() as i64).max(8) + 1;

    let seed_cell = (seed / CELL).floor() as i64;
    let mut cache: std::collections::BTreeMap<i64, f64> = std::collections::BTreeMap::new();
    let value_at = |k: i64, cache: &mut std::collections::BTreeMap<i64, f64>| -> f64 {
        *cache.entry(k).or_insert_with(|| res(k as f64 * CELL))
    };

    // Probe points ordered by distance from the seed: 0, +1, -1, +2, -2, ...
    let try_bracket = |k_lo: i64,
                           k_hi: i64,
                           cache: &mut std::collections::BTreeMap<i64, f64>|
     -> Result<Option<f64>> {
        let f_lo = value_at(k_lo, cache);
        let f_hi = value_at(k_hi, cache);
        if f_lo != 0.0 && f_hi != 0.0 && f_lo.signum() == f_hi.signum() {
            return Ok(None);
        }
        // binary search for the canonical sign-change cell
        let (mut a, mut b) = (k_lo, k_hi);
        let mut fa = f_lo;
        while b - a > 1 {
            let mid = (a + b) / 2;
            let fm = value_at(mid, cache);
            if fm == 0.0 || fm.signum() != fa.signum() {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        let f_a = value_at(a, cache);
        let f_b = value_at(b, cache);
        refine(g, kind, h, potential_sign, a as f64 * CELL, b as f64 * CELL, f_a, f_b, tol)
    };

    for d in 0..max_probe {
        for dir in [1i64, -1] {
            let (k_lo, k_hi) = if dir > 0 {
                (seed_cell + d * PROBE_CELLS, seed_cell + (d + 1) * PROBE_CELLS)
            } else {
                (seed_cell - (d + 1) * PROBE_CELLS, seed_cell - d * PROBE_CELLS)
            };
            if let Some(root) = try_bracket(k_lo, k_hi, &mut cache)? {
                return Ok(root);
            }
        }
    }
    Err(Error::BracketingFailed { lo: scan_lo, hi: scan_hi, expected_roots: g as usize })
}

/// Bisection plus a deterministic secant polish inside one bracket; `None`
/// when the converged root carries the wrong zero count.
#[allow(clippy::too_many_arguments)]
fn refine(
    g: u32,
    kind: AngularKind,
    h: f64,
    potential_sign: f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let res = |r: f64| shoot(g, kind, h, r, potential_sign);
    if fa == 0.0 {
        b = a;
        fb = fa;
    }
    while (b - a).abs() > 1e-9 {
        let mid = 0.5 * (a + b);
        let fm = res(mid).residual;
        if fm == 0.0 {
            a = mid;
            b = mid;
            fa = fm;
            fb = fm;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    // secant polish from the deterministic bisection state
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..12 {
        if f1 == f0 || x1 == x0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() {
            break;
        }
        let f2 = res(x2).residual;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (x1 - x0).abs() <= 4.0 * f64::EPSILON * x1.abs().max(1.0) {
            break;
        }
    }
    let root = x1;
    let final_shot = res(root);
    if zero_count(g, kind, &final_shot) != g as usize {
        return Ok(None);
    }
    let scale = final_shot.max_abs.max(1.0);
    if final_shot.residual.abs() > tol * scale {
        return Err(Error::TolUnachievable { tol, best: final_shot.residual.abs() / scale });
    }
    Ok(Some(root))
}

fn seed_value(g: u32, kind: AngularKind, h: f64, potential_sign: f64) -> f64 {
    // The sign-flipped potential characteristic equals the same order's value
    // for even g, and the opposite kind's for odd g.
    let seed_kind = if potential_sign < 0.0 && g % 2 == 1 {
        match kind {
            AngularKind::Even => AngularKind::Odd,
            AngularKind::Odd => AngularKind::Even,
        }
    } else {
        kind
    };
    charval_series(g, seed_kind, h).map_or((g * g) as f64, |cv| cv.r)
}

pub(crate) fn charval_shoot_impl(
    g: u32,
    kind: AngularKind,
    h: f64,
    tol: f64,
    potential_sign: f64,
    hint: Option<f64>,
) -> Result<CharacteristicValue> {
    kind.check_order(g)?;
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("h must be >= 0, got {h}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let seed = hint.unwrap_or_else(|| seed_value(g, kind, h, potential_sign));
    let r = solve_from_seed(g, kind, h, seed, potential_sign, tol)?;
    Ok(CharacteristicValue { r, kind, order: g, h, method: CharvalMethod::Shooting })
}

/// Characteristic constant by shooting; the branch with exactly `g` zeros in
/// `[0, pi)` is selected.
pub fn charval_shoot(g: u32, kind: AngularKind, h: f64, tol: f64) -> Result<CharacteristicValue> {
    charval_shoot_impl(g, kind, h, tol, 1.0, None)
}

/// Shooting against the sign-flipped potential `R + 2h^2 cos 2a`; used to
/// check the parity identities between the two kinds.
pub fn charval_shoot_signed(
    g: u32,
    kind: AngularKind,
    h: f64,
    tol: f64,
    potential_sign: f64,
) -> Result<CharacteristicValue> {
    if potential_sign != 1.0 && potential_sign != -1.0 {
        return Err(Error::InvalidInput("potential_sign must be +1 or -1".into()));
    }
    charval_shoot_impl(g, kind, h, tol, potential_sign, None)
}

/// Shooting with an external seed for the bracket search; the converged value
/// is independent of the seed (it only steers the canonical-cell search).
pub(crate) fn charval_shoot_hinted(
    g: u32,
    kind: AngularKind,
    h: f64,
    tol: f64,
    hint: f64,
) -> Result<CharacteristicValue> {
    charval_shoot_impl(g, kind, h, tol, 1.0, Some(hint))
}
