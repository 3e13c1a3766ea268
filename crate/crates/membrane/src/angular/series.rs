//! Perturbation series for the characteristic constant.
//!
//! For orders `g <= 4` the series hit small denominators and each order has
//! its own tabulated expansion; `g = 0` and `g >= 5` use the generic formula
//!
//! ```text
//! R = g^2 + h^4 / (2(g^2-1))
//!         + (5g^2+7) h^8 / (32 (g^2-1)^3 (g^2-4))
//!         + (9g^6+22g^4-203g^2-116) h^12 / (64 (g^2-1)^5 (g^2-4)^2 (g^2-9)),
//! ```
//!
//! truncated before a retained term would hit a vanishing denominator
//! (through h^8 for g in {5, 6}, through h^12 for g >= 7; g = 0 is the one
//! order where the generic expansion can be pushed as far as written). The
//! odd kind for odd `g` is the even-kind table with `h^2 -> -h^2`; for even
//! `g` the two kinds share all retained terms.

use super::{AngularKind, CharacteristicValue, CharvalMethod};
use crate::error::{Error, Result};

/// Tabulated corrections as (power of h^2, coefficient).
///
/// Odd orders carry one table per pair of kinds (the odd kind is the even
/// kind with `h^2 -> -h^2`); even orders have only even powers of `h^2` yet
/// still split by kind from the first resonance-adjusted term on, so both
/// tables are spelled out. The g = 3 entries 13/20480 and -5/16384 repair
/// one-digit misprints in the historical table (the generic formula
/// evaluated at g = 3 independently gives 13/20480).
fn table(g: u32, kind: AngularKind) -> Option<&'static [(u32, f64)]> {
    const G1: &[(u32, f64)] = &[
        (1, 1.0),
        (2, -1.0 / 8.0),
        (3, -1.0 / 64.0),
        (4, -1.0 / 1536.0),
        (5, 11.0 / 36864.0),
    ];
    const G2_EVEN: &[(u32, f64)] = &[
        (2, 5.0 / 12.0),
        (4, -763.0 / 13824.0),
        (6, 1002419.0 / 79626240.0),
    ];
    const G2_ODD: &[(u32, f64)] = &[
        (2, -1.0 / 12.0),
        (4, 5.0 / 13824.0),
        (6, -289.0 / 79626240.0),
    ];
    const G3: &[(u32, f64)] = &[
        (2, 1.0 / 16.0),
        (3, 1.0 / 64.0),
        (4, 13.0 / 20480.0),
        (5, -5.0 / 16384.0),
    ];
    const G4_EVEN: &[(u32, f64)] = &[
        (2, 1.0 / 30.0),
        (4, 433.0 / 864000.0),
        (6, -189983.0 / 21772800000.0),
    ];
    const G4_ODD: &[(u32, f64)] = &[
        (2, 1.0 / 30.0),
        (4, -317.0 / 864000.0),
        (6, 4507.0 / 1360800000.0),
    ];
    match (g, kind) {
        (1, _) => Some(G1),
        (2, AngularKind::Even) => Some(G2_EVEN),
        (2, AngularKind::Odd) => Some(G2_ODD),
        (3, _) => Some(G3),
        (4, AngularKind::Even) => Some(G4_EVEN),
        (4, AngularKind::Odd) => Some(G4_ODD),
        _ => None,
    }
}

/// Generic corrections for orders clear of the small denominators.
fn generic_terms(g: u32) -> Vec<(u32, f64)> {
    let g2 = (g * g) as f64;
    let mut terms = vec![(2, 1.0 / (2.0 * (g2 - 1.0)))];
    terms.push((4, (5.0 * g2 + 7.0) / (32.0 * (g2 - 1.0).powi(3) * (g2 - 4.0))));
    if g == 0 || g >= 7 {
        let g4 = g2 * g2;
        let g6 = g4 * g2;
        terms.push((
            6,
            (9.0 * g6 + 22.0 * g4 - 203.0 * g2 - 116.0)
                / (64.0 * (g2 - 1.0).powi(5) * (g2 - 4.0).powi(2) * (g2 - 9.0)),
        ));
    }
    terms
}

/// Correction terms (in powers of q = h^2) for the given order and kind.
pub(crate) fn correction_terms(g: u32, kind: AngularKind) -> Vec<(u32, f64)> {
    let base: Vec<(u32, f64)> = match table(g, kind) {
        Some(t) => t.to_vec(),
        None => generic_terms(g),
    };
    // odd orders: the odd kind is the even table with h^2 -> -h^2
    if kind.is_odd() && g % 2 == 1 {
        base.into_iter()
            .map(|(p, c)| (p, if p % 2 == 1 { -c } else { c }))
            .collect()
    } else {
        base
    }
}

/// Truncated perturbation value of the characteristic constant.
///
/// Fails with [`Error::SeriesDiverged`] when successive retained terms stop
/// decreasing in magnitude — the signal to stop trusting the expansion.
pub fn charval_series(g: u32, kind: AngularKind, h: f64) -> Result<CharacteristicValue> {
    kind.check_order(g)?;
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("h must be >= 0, got {h}")));
    }
    let q = h * h;
    let terms = correction_terms(g, kind);
    let mut r = (g * g) as f64;
    let mut prev_mag = f64::INFINITY;
    for (idx, &(p, c)) in terms.iter().enumerate() {
        let t = c * q.powi(p as i32);
        let mag = t.abs();
        if mag > 0.0 {
            if mag >= prev_mag {
                return Err(Error::SeriesDiverged {
                    h,
                    index: idx,
                    magnitude: mag,
                    previous: prev_mag,
                });
            }
            prev_mag = mag;
        }
        r += t;
    }
    Ok(CharacteristicValue {
        r,
        kind,
        order: g,
        h,
        method: CharvalMethod::Series,
    })
}
