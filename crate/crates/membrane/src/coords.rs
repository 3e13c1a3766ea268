//! Confocal elliptic coordinates.
//!
//! The frame is fixed by the focal half-distance `c`; a point is addressed by
//! `(alpha, beta)` through
//!
//! ```text
//! x = c cosh(beta) cos(alpha),   y = c sinh(beta) sin(alpha).
//! ```
//!
//! Level sets `beta = const` are confocal ellipses, `alpha = const` are
//! hyperbola branch-halves terminated at the major axis. `(-alpha, -beta)`
//! and `(alpha, beta)` address the same Cartesian point, so the canonical
//! form keeps `beta >= 0` and `alpha` in `[0, 2*pi)`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// Points closer than this (relative to `c`) to the inter-focal segment snap
/// to `beta = 0` exactly, stabilizing nodal-line classification.
const FOCAL_SNAP: f64 = 1e-14;

/// Confocal frame plus the boundary ellipse parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeometry {
    /// Focal half-distance, strictly positive.
    pub c: f64,
    /// Boundary parameter: the contour is the ellipse `beta = theta`.
    pub theta: f64,
}

impl EllipseGeometry {
    pub fn new(c: f64, theta: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!("focal half-distance must be positive, got {c}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("boundary parameter must be positive, got {theta}")));
        }
        Ok(Self { c, theta })
    }

    /// Build the frame from the boundary semi-axes `A > B > 0`.
    pub fn from_semi_axes(a: f64, b: f64) -> Result<Self> {
        if !(a > b && b > 0.0) || !a.is_finite() {
            return Err(Error::InvalidInput(format!(
                "semi-axes must satisfy A > B > 0, got A = {a}, B = {b}"
            )));
        }
        let c = (a * a - b * b).sqrt();
        // theta with atanh(B/A) = artanh of the axis ratio
        let theta = (b / a).atanh();
        Self::new(c, theta)
    }

    /// Semi-major axis `A = c cosh(theta)`.
    pub fn semi_major(&self) -> f64 {
        self.c * self.theta.cosh()
    }

    /// Semi-minor axis `B = c sinh(theta)`.
    pub fn semi_minor(&self) -> f64 {
        self.c * self.theta.sinh()
    }

    /// Eccentricity `e = c / A = 1 / cosh(theta)`, in (0, 1).
    pub fn eccentricity(&self) -> f64 {
        1.0 / self.theta.cosh()
    }
}

/// A point in canonical elliptic coordinates: `alpha` in `[0, 2*pi)`, `beta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPoint {
    pub alpha: f64,
    pub beta: f64,
}

impl EllipticPoint {
    /// Canonicalizes `(alpha, beta)`: a negative `beta` maps through the
    /// `(-alpha, -beta)` identification, and `alpha` is wrapped into `[0, 2*pi)`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite coordinates ({alpha}, {beta})")));
        }
        let (mut alpha, mut beta) = (alpha, beta);
        if beta < 0.0 {
            beta = -beta;
            alpha = -alpha;
        }
        alpha = alpha.rem_euclid(TAU);
        Ok(Self { alpha, beta })
    }
}

/// Forward map `(alpha, beta) -> (x, y)` in the frame with focal half-distance `c`.
pub fn elliptic_to_cartesian(c: f64, p: EllipticPoint) -> Result<(f64, f64)> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput(format!("focal half-distance must be positive, got {c}")));
    }
    if !p.alpha.is_finite() || !p.beta.is_finite() {
        return Err(Error::InvalidInput("non-finite point".into()));
    }
    Ok((
        c * p.beta.cosh() * p.alpha.cos(),
        c * p.beta.sinh() * p.alpha.sin(),
    ))
}

/// Inverse map, canonical output. Rejects `c = 0` (degenerate frame; that
/// limit is the circular membrane and has its own solver).
pub fn cartesian_to_elliptic(c: f64, x: f64, y: f64) -> Result<EllipticPoint> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput(format!(
            "degenerate frame c = {c}; use the circle solver for c = 0"
        )));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite Cartesian input ({x}, {y})")));
    }
    let p = x / c;
    let q = y / c;

    // Distance to the inter-focal segment decides the beta = 0 snap.
    let seg_dist = if p.abs() <= 1.0 {
        q.abs()
    } else {
        ((p.abs() - 1.0).powi(2) + q * q).sqrt()
    };
    if seg_dist <= FOCAL_SNAP && p.abs() <= 1.0 + FOCAL_SNAP {
        let alpha = p.clamp(-1.0, 1.0).acos();
        let alpha = if y < 0.0 && alpha > 0.0 && alpha < PI {
            TAU - alpha
        } else {
            alpha
        };
        return EllipticPoint::new(alpha, 0.0);
    }

    // cosh^2(beta) solves mu^2 - (1 + p^2 + q^2) mu + p^2 = 0 (larger root).
    let s = p * p + q * q;
    let half = 0.5 * (1.0 + s);
    let disc = (half * half - p * p).max(0.0).sqrt();
    let mu = half + disc;
    let sinh_b = (mu - 1.0).max(0.0).sqrt();
    let beta = sinh_b.asinh();
    let cosh_b = mu.sqrt();

    let cos_a = (p / cosh_b).clamp(-1.0, 1.0);
    let mut alpha = cos_a.acos(); // in [0, pi], sin(alpha) >= 0
    if y < 0.0 {
        alpha = TAU - alpha;
    } else if y == 0.0 && x < 0.0 {
        alpha = PI;
    }
    EllipticPoint::new(alpha, beta)
}

/// The separation weight `H^2 = cosh^2(beta) - cos^2(alpha)`; zero exactly at
/// the foci, where the coordinate map degenerates.
pub fn metric_weight(p: EllipticPoint) -> f64 {
    let ch = p.beta.cosh();
    let ca = p.alpha.cos();
    (ch * ch - ca * ca).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn focus_and_center() {
        let (x, y) = elliptic_to_cartesian(1.0, EllipticPoint::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!((x, y), (1.0, 0.0));
        let (x, y) = elliptic_to_cartesian(1.0, EllipticPoint::new(PI / 2.0, 0.0).unwrap()).unwrap();
        assert!(x.abs() < 1e-16 && y == 0.0);
    }

    #[test]
    fn forward_high_precision_point() {
        let p = EllipticPoint::new(PI / 3.0, 1.0).unwrap();
        let (x, y) = elliptic_to_cartesian(1.0, p).unwrap();
        assert!((x - 1.0f64.cosh() * 0.5).abs() < 1e-15);
        assert!((y - 1.0f64.sinh() * 3.0f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_trivial_points() {
        let p = cartesian_to_elliptic(1.0, 1.0, 0.0).unwrap();
        assert_eq!((p.alpha, p.beta), (0.0, 0.0));
        let p = cartesian_to_elliptic(1.0, 0.0, 0.0).unwrap();
        assert!((p.alpha - PI / 2.0).abs() < 1e-15 && p.beta == 0.0);
    }

    #[test]
    fn round_trip() {
        let p = EllipticPoint::new(2.1, 0.7).unwrap();
        let (x, y) = elliptic_to_cartesian(1.0, p).unwrap();
        let back = cartesian_to_elliptic(1.0, x, y).unwrap();
        let (x2, y2) = elliptic_to_cartesian(1.0, back).unwrap();
        let norm = x.hypot(y);
        assert!(((x - x2).hypot(y - y2)) / norm < TOL);
        assert!(back.beta >= 0.0);
        assert!((back.alpha - 2.1).abs() < 1e-12 && (back.beta - 0.7).abs() < 1e-12);
    }

    #[test]
    fn metric_weight_values() {
        assert_eq!(metric_weight(EllipticPoint::new(0.0, 0.0).unwrap()), 0.0);
        let w = metric_weight(EllipticPoint::new(PI / 2.0, 0.0).unwrap());
        assert!((w - 1.0).abs() < 1e-15);
        let w = metric_weight(EllipticPoint::new(0.3, 0.4).unwrap());
        assert!((w - (0.4f64.cosh().powi(2) - 0.3f64.cos().powi(2))).abs() < 1e-15);
    }

    #[test]
    fn metric_weight_symmetries() {
        for &(a, b) in &[(0.3, 0.4), (1.2, 0.1), (4.0, 1.3)] {
            let w = metric_weight(EllipticPoint::new(a, b).unwrap());
            let w_neg = metric_weight(EllipticPoint::new(-a, -b).unwrap());
            let w_mirror = metric_weight(EllipticPoint::new(PI - a, b).unwrap());
            assert!((w - w_neg).abs() < 1e-15);
            assert!((w - w_mirror).abs() < 1e-15);
        }
    }

    #[test]
    fn geometry_axes_ordering() {
        let g = EllipseGeometry::new(0.3, 1.87).unwrap();
        assert!(g.semi_major() > g.semi_minor() && g.semi_minor() > 0.0);
        let e = g.eccentricity();
        assert!(e > 0.0 && e < 1.0);
        let g2 = EllipseGeometry::from_semi_axes(g.semi_major(), g.semi_minor()).unwrap();
        assert!((g2.c - g.c).abs() < 1e-14 && (g2.theta - g.theta).abs() < 1e-14);
    }

    #[test]
    fn focal_segment_snap() {
        let p = cartesian_to_elliptic(1.0, 0.5, 1e-15).unwrap();
        assert_eq!(p.beta, 0.0);
        assert!((p.alpha - 0.5f64.acos()).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(cartesian_to_elliptic(0.0, 1.0, 1.0).is_err());
        assert!(elliptic_to_cartesian(1.0, EllipticPoint { alpha: f64::NAN, beta: 0.0 }).is_err());
        assert!(EllipticPoint::new(f64::INFINITY, 0.0).is_err());
    }
}
