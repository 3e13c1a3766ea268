//! Nodal-line geometry.
//!
//! On a pure mode the displacement factors as `P(alpha) Q(beta)`, so the
//! nodal set is a union of confocal curves: hyperbola branch-halves at the
//! zeros of `P` and confocal ellipses at the zeros of `Q`. Counting follows
//! the convention that a full hyperbola (two branch-halves per asymptote
//! line) counts as two hyperbolic lines while a nodal axis counts as one —
//! with that convention a pure mode always shows exactly `g` hyperbolic lines
//! and `i - 1` nodal ellipses.
//!
//! Superposing a near-degenerate pair `(A P1 + B P2) Q` keeps the counts but
//! breaks the axis symmetry; the zero set is extracted by marching squares on
//! the coordinate grid.

use crate::coords::{elliptic_to_cartesian, EllipseGeometry, EllipticPoint};
use crate::error::{Error, Result};
use crate::spectrum::MembraneMode;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

/// Angular tolerance for classifying a root as an axis.
const AXIS_EPS: f64 = 1e-8;

/// Default relative-gap threshold for accepting a superposition of a
/// near-degenerate pair.
pub const DEGENERACY_GAP_THRESHOLD: f64 = 2e-2;

/// Nodal data of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalGeometry {
    /// Zeros of `P` in `[0, pi)`, sorted ascending.
    pub hyperbolic_alphas: Vec<f64>,
    pub includes_major_axis: bool,
    pub includes_minor_axis: bool,
    /// Zeros of `Q` strictly between the inner edge and the contour.
    pub ellipse_betas: Vec<f64>,
    /// Hyperbolic-line count under the axis convention (equals the order).
    pub counted_hyperbolic_lines: usize,
}

/// Angular part of the nodal set: all `alpha` with `P(alpha) = 0` in
/// `[0, pi)`, axes flagged, lines counted per the convention.
pub fn hyperbolic_nodal_angles(mode: &MembraneMode) -> Result<NodalGeometry> {
    let f = mode.angular_function();
    let roots = f.roots(0.0, PI);
    let includes_major_axis = roots.first().is_some_and(|&r| r < AXIS_EPS);
    let includes_minor_axis = roots.iter().any(|&r| (r - PI / 2.0).abs() < AXIS_EPS);
    let counted = roots.len();
    Ok(NodalGeometry {
        hyperbolic_alphas: roots,
        includes_major_axis,
        includes_minor_axis,
        ellipse_betas: Vec::new(),
        counted_hyperbolic_lines: counted,
    })
}

/// The `i - 1` nodal ellipses: zeros of `Q`, each refined in `beta`, returned
/// with their semi-axes. A count other than `i - 1` is a hard error — it
/// means an eigenvalue root was missed upstream.
pub fn nodal_ellipses(mode: &MembraneMode) -> Result<Vec<(f64, f64, f64)>> {
    let betas = mode.radial_interior_roots();
    let expected = mode.spec.index as usize - 1;
    if betas.len() != expected {
        return Err(Error::NodalCountMismatch { expected, found: betas.len() });
    }
    Ok(betas
        .into_iter()
        .map(|b| {
            let c = mode.geometry.c;
            (b, c * b.cosh(), c * b.sinh())
        })
        .collect())
}

/// Complete nodal description of a pure mode.
pub fn nodal_geometry(mode: &MembraneMode) -> Result<NodalGeometry> {
    let mut geo = hyperbolic_nodal_angles(mode)?;
    geo.ellipse_betas = nodal_ellipses(mode)?.into_iter().map(|(b, _, _)| b).collect();
    Ok(geo)
}

/// A polyline in Cartesian coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline(pub Vec<(f64, f64)>);

/// Nodal set of a superposed near-degenerate pair.
#[derive(Debug, Clone)]
pub struct SuperposedNodal {
    /// Zeros of `A P1 + B P2` over a full period `[0, 2 pi)`.
    pub alpha_roots: Vec<f64>,
    /// Hyperbolic lines: asymptote pairs `{a, a + pi}` of the roots.
    pub counted_lines: usize,
    /// Shared nodal ellipses (zeros of the common radial factor).
    pub shared_betas: Vec<f64>,
    /// Marching-squares zero contour of the superposed field, Cartesian.
    pub polylines: Vec<Polyline>,
    /// The superposition is generally not symmetric about the axes.
    pub axis_symmetric: bool,
    /// Sign picked up under `alpha -> alpha + pi`: `+1` for even order,
    /// `-1` for odd.
    pub parity_sign: i8,
}

/// Zero set of `A P1 + B P2` combined with the (shared) radial zeros for a
/// near-degenerate pair with the same `(g, i)`.
pub fn superposed_nodal(
    mode_even: &MembraneMode,
    mode_odd: &MembraneMode,
    a: f64,
    b: f64,
    grid: usize,
) -> Result<SuperposedNodal> {
    superposed_nodal_with_threshold(mode_even, mode_odd, a, b, grid, DEGENERACY_GAP_THRESHOLD)
}

pub fn superposed_nodal_with_threshold(
    mode_even: &MembraneMode,
    mode_odd: &MembraneMode,
    a: f64,
    b: f64,
    grid: usize,
    max_gap: f64,
) -> Result<SuperposedNodal> {
    use crate::angular::AngularKind;
    if mode_even.spec.kind != AngularKind::Even || mode_odd.spec.kind != AngularKind::Odd {
        return Err(Error::InvalidInput("pass (even, odd) modes in that order".into()));
    }
    if mode_even.spec.order != mode_odd.spec.order || mode_even.spec.index != mode_odd.spec.index {
        return Err(Error::InvalidInput("superposition needs matching (g, i)".into()));
    }
    if mode_even.geometry != mode_odd.geometry {
        return Err(Error::GeometryMismatch);
    }
    let gap = (mode_even.lambda - mode_odd.lambda).abs() / mode_even.lambda;
    if gap > max_gap {
        return Err(Error::NotNearDegenerate { gap, threshold: max_gap });
    }
    let g = mode_even.spec.order;
    let combined = |alpha: f64| a * mode_odd.p_eval(alpha) + b * mode_even.p_eval(alpha);

    // alpha roots over the full period
    let mut alpha_roots = Vec::new();
    let samples = (256 * (g as usize + 2)).max(1024);
    let dx = 2.0 * PI / samples as f64;
    let mut prev = combined(0.0);
    if prev == 0.0 {
        alpha_roots.push(0.0);
    }
    for k in 1..=samples {
        let x = k as f64 * dx;
        let v = combined(x);
        if v == 0.0 {
            // sampled an exact zero (symmetric configurations do this)
            if x < 2.0 * PI {
                alpha_roots.push(x);
            }
        } else if prev != 0.0 && prev.signum() != v.signum() {
            let (mut lo, mut hi, mut flo) = (x - dx, x, prev);
            for _ in 0..70 {
                let mid = 0.5 * (lo + hi);
                let fm = combined(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            if root < 2.0 * PI {
                alpha_roots.push(root);
            }
        }
        prev = v;
    }

    // shared radial zeros: use the even mode's radial factor
    let shared_betas = mode_even.radial_interior_roots();

    // level set of the superposed field on the (alpha, beta) grid
    let theta = mode_even.geometry.theta;
    let beta_lo = mode_even.beta_lo();
    let field = |alpha: f64, beta: f64| {
        (a * mode_odd.p_eval(alpha) + b * mode_even.p_eval(alpha)) * mode_even.q_eval(beta).q
    };
    let polylines = marching_squares(&field, mode_even.geometry.c, beta_lo, theta, grid);

    Ok(SuperposedNodal {
        counted_lines: alpha_roots.len() / 2,
        alpha_roots,
        shared_betas,
        polylines,
        axis_symmetric: a == 0.0 || b == 0.0,
        parity_sign: if g % 2 == 0 { 1 } else { -1 },
    })
}

/// Marching squares with linear interpolation on the periodic-by-bounded
/// coordinate rectangle, mapped to Cartesian segments.
fn marching_squares(
    field: &dyn Fn(f64, f64) -> f64,
    c: f64,
    beta_lo: f64,
    beta_hi: f64,
    grid: usize,
) -> Vec<Polyline> {
    let n = grid.max(16);
    let da = 2.0 * PI / n as f64;
    let db = (beta_hi - beta_lo) / n as f64;
    let mut values = vec![0.0f64; (n + 1) * (n + 1)];
    for ia in 0..=n {
        for ib in 0..=n {
            values[ia * (n + 1) + ib] = field(ia as f64 * da, beta_lo + ib as f64 * db);
        }
    }
    let at = |ia: usize, ib: usize| values[ia * (n + 1) + ib];
    let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();
    let interp = |p: f64, q: f64| p / (p - q);
    for ia in 0..n {
        for ib in 0..n {
            let a0 = ia as f64 * da;
            let b0 = beta_lo + ib as f64 * db;
            let v00 = at(ia, ib);
            let v10 = at(ia + 1, ib);
            let v01 = at(ia, ib + 1);
            let v11 = at(ia + 1, ib + 1);
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2);
            if (v00 < 0.0) != (v10 < 0.0) {
                pts.push((a0 + da * interp(v00, v10), b0));
            }
            if (v01 < 0.0) != (v11 < 0.0) {
                pts.push((a0 + da * interp(v01, v11), b0 + db));
            }
            if (v00 < 0.0) != (v01 < 0.0) {
                pts.push((a0, b0 + db * interp(v00, v01)));
            }
            if (v10 < 0.0) != (v11 < 0.0) {
                pts.push((a0 + da, b0 + db * interp(v10, v11)));
            }
            if pts.len() == 2 {
                let to_xy = |(al, be): (f64, f64)| {
                    elliptic_to_cartesian(c, EllipticPoint { alpha: al, beta: be }).unwrap_or((0.0, 0.0))
                };
                segments.push((to_xy(pts[0]), to_xy(pts[1])));
            }
        }
    }
    segments
        .into_iter()
        .map(|(p, q)| Polyline(vec![p, q]))
        .collect()
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

/// Deterministic SVG 1.1 drawing of the boundary plus the nodal set.
pub fn export_nodal_svg(
    geometry: &EllipseGeometry,
    nodal: &NodalGeometry,
    path: &Path,
) -> Result<()> {
    let svg = nodal_svg_string(geometry, nodal);
    let mut file = std::fs::File::create(path)?;
    file.write_all(svg.as_bytes())?;
    Ok(())
}

pub fn nodal_svg_string(geometry: &EllipseGeometry, nodal: &NodalGeometry) -> String {
    let a = geometry.semi_major();
    let b = geometry.semi_minor();
    let margin = 0.08 * a;
    let (w, h) = (2.0 * (a + margin), 2.0 * (b + margin));
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
        fmt(-w / 2.0),
        fmt(-h / 2.0),
        fmt(w),
        fmt(h)
    ));
    out.push_str("<g fill=\"none\" stroke-width=\"0.35%\">\n");
    out.push_str(&format!(
        "<ellipse cx=\"0\" cy=\"0\" rx=\"{}\" ry=\"{}\" stroke=\"black\"/>\n",
        fmt(a),
        fmt(b)
    ));
    for &beta in &nodal.ellipse_betas {
        out.push_str(&format!(
            "<ellipse cx=\"0\" cy=\"0\" rx=\"{}\" ry=\"{}\" stroke=\"crimson\"/>\n",
            fmt(geometry.c * beta.cosh()),
            fmt(geometry.c * beta.sinh())
        ));
    }
    for &alpha in &nodal.hyperbolic_alphas {
        if alpha < AXIS_EPS {
            // major axis
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"steelblue\"/>\n",
                fmt(-a),
                fmt(a)
            ));
        } else if (alpha - PI / 2.0).abs() < AXIS_EPS {
            out.push_str(&format!(
                "<line x1=\"0\" y1=\"{}\" x2=\"0\" y2=\"{}\" stroke=\"steelblue\"/>\n",
                fmt(-b),
                fmt(b)
            ));
        } else {
            // branch-halves at alpha and its mirror images, sampled in beta
            for branch in [alpha, 2.0 * PI - alpha] {
                let mut d = String::from("M");
                let samples = 64;
                for k in 0..=samples {
                    let beta = geometry.theta * k as f64 / samples as f64;
                    let (x, y) = (
                        geometry.c * beta.cosh() * branch.cos(),
                        geometry.c * beta.sinh() * branch.sin(),
                    );
                    if k > 0 {
                        d.push('L');
                    }
                    d.push_str(&format!("{},{}", fmt(x), fmt(-y)));
                }
                out.push_str(&format!("<path d=\"{d}\" stroke=\"steelblue\"/>\n"));
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// CSV listing of the nodal set: `value,type,count_weight` with one row per
/// alpha root (axes classified) and per nodal ellipse.
pub fn nodal_csv(nodal: &NodalGeometry) -> String {
    let mut out = String::from("value,type,count_weight\n");
    for &alpha in &nodal.hyperbolic_alphas {
        let kind = if alpha < AXIS_EPS {
            "major_axis"
        } else if (alpha - PI / 2.0).abs() < AXIS_EPS {
            "minor_axis"
        } else {
            "hyperbolic_line"
        };
        out.push_str(&format!("{},{},1\n", fmt_g(alpha), kind));
    }
    for &beta in &nodal.ellipse_betas {
        out.push_str(&format!("{},ellipse,1\n", fmt_g(beta)));
    }
    out
}

fn fmt_g(v: f64) -> String {
    format!("{v:.14e}")
}
