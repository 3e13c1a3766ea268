//! Eigenfrequency computation.
//!
//! A mode is fixed by `(kind, g, i)`: the `i`-th positive root `lambda_i` of
//! the boundary condition `Q(theta; lambda) = 0`, where every evaluation
//! recomputes the characteristic constant `R = R(g, kind, lambda c)` before
//! integrating the radial equation out to the contour. Roots are certified by
//! sign changes on a `lambda` scan whose step comes from the circular-limit
//! spacing `pi/(2A)`, halved; a doubled-resolution rescan guards against
//! skipped roots on strongly eccentric membranes.

use crate::angular::{
    charval_shoot, AngularFunction, AngularKind, CharacteristicValue, CharvalMethod,
};
use crate::coords::EllipseGeometry;
use crate::error::{Error, Result};
use crate::ode::{integrate_observed, AnnulusCoefficient, Checkpoints, RadialCoefficient};
use crate::radial::{annulus_from_geometry, AnnulusParam, RadialFunction, RadialValue};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Radial integration resolution for boundary evaluations.
const RADIAL_STEPS: usize = 768;

/// Shooting tolerance used inside the eigenvalue search.
const CHARVAL_TOL: f64 = 1e-12;

/// Probe ceiling for the lambda scan.
const SCAN_PROBE_CEILING: usize = 4000;

/// Mode label: kind, order, and 1-based radial index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeSpec {
    pub kind: AngularKind,
    pub order: u32,
    pub index: u32,
}

impl ModeSpec {
    pub fn new(kind: AngularKind, order: u32, index: u32) -> Result<Self> {
        kind.check_order(order)?;
        if index == 0 {
            return Err(Error::InvalidInput("radial index is 1-based".into()));
        }
        Ok(Self { kind, order, index })
    }
}

/// Membrane material: `wave_speed^2 = tension / density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneMaterial {
    pub wave_speed: f64,
}

impl MembraneMaterial {
    pub fn new(wave_speed: f64) -> Result<Self> {
        if !(wave_speed > 0.0) {
            return Err(Error::InvalidInput(format!("wave speed must be positive, got {wave_speed}")));
        }
        Ok(Self { wave_speed })
    }
}

/// Pitch `N = lambda * wave_speed / pi` of a mode with spatial eigenvalue `lambda`.
pub fn frequency(lambda: f64, material: &MembraneMaterial) -> f64 {
    lambda * material.wave_speed / PI
}

pub(crate) enum RadialShape {
    Full(RadialFunction),
    Annulus {
        param: AnnulusParam,
        eps_outer: f64,
        checkpoints: Checkpoints<AnnulusCoefficient>,
    },
}

/// Assembled eigenpair: eigenvalue, characteristic constant, and the two
/// factor functions ready for evaluation.
pub struct MembraneMode {
    pub spec: ModeSpec,
    pub lambda: f64,
    pub cv: CharacteristicValue,
    pub geometry: EllipseGeometry,
    pub(crate) angular: Arc<AngularFunction>,
    pub(crate) radial: Arc<RadialShape>,
}

impl MembraneMode {
    pub fn p_eval(&self, alpha: f64) -> f64 {
        self.angular.eval(alpha)
    }

    pub fn angular_function(&self) -> &AngularFunction {
        &self.angular
    }

    /// `Q(beta)` in the full-membrane coordinate; for annulus modes `beta`
    /// must lie between the contours.
    pub fn q_eval(&self, beta: f64) -> RadialValue {
        match &*self.radial {
            RadialShape::Full(f) => f.eval_ode(beta),
            RadialShape::Annulus { param, checkpoints, .. } => {
                let (q, dq) = checkpoints.eval(beta - param.eps0);
                RadialValue { q, dq_dbeta: dq }
            }
        }
    }

    pub fn radial_function(&self) -> Option<&RadialFunction> {
        match &*self.radial {
            RadialShape::Full(f) => Some(f),
            RadialShape::Annulus { .. } => None,
        }
    }

    /// Inner edge of the radial domain: 0 for the full membrane, the inner
    /// contour parameter for the annulus.
    pub fn beta_lo(&self) -> f64 {
        match &*self.radial {
            RadialShape::Full(_) => 0.0,
            RadialShape::Annulus { param, .. } => param.eps0,
        }
    }

    /// Zeros of `Q` strictly between the inner edge and the contour.
    pub fn radial_interior_roots(&self) -> Vec<f64> {
        match &*self.radial {
            RadialShape::Full(f) => f.roots(self.geometry.theta),
            RadialShape::Annulus { param, eps_outer, .. } => {
                crate::radial::annulus_interior_roots(
                    param.f,
                    param.q_ann,
                    self.cv.r,
                    *eps_outer,
                )
                .into_iter()
                .map(|e| e + param.eps0)
                .collect()
            }
        }
    }
}

impl std::fmt::Debug for MembraneMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MembraneMode")
            .field("spec", &self.spec)
            .field("lambda", &self.lambda)
            .field("r", &self.cv.r)
            .finish()
    }
}

// ---------------------------------------------------------------------------
// Characteristic-value memoization
// ---------------------------------------------------------------------------

type CacheKey = (bool, u32, u64);

fn charval_cache() -> &'static Mutex<BTreeMap<CacheKey, f64>> {
    static CACHE: OnceLock<Mutex<BTreeMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn quantize_h(h: f64) -> u64 {
    (h * 1e12).round() as u64
}

/// Characteristic constant with memoization on `(kind, g, h)`; the `hint`
/// only steers the bracket search and cannot change the converged value.
pub(crate) fn resolve_charval(kind: AngularKind, g: u32, h: f64, hint: Option<f64>) -> Result<f64> {
    let key = (kind.is_even(), g, quantize_h(h));
    if let Some(&r) = charval_cache().lock().unwrap().get(&key) {
        return Ok(r);
    }
    let seeded = match hint {
        Some(r0) => crate::angular::charval_shoot_hinted(g, kind, h, CHARVAL_TOL, r0)?,
        None => charval_shoot(g, kind, h, CHARVAL_TOL)?,
    };
    charval_cache().lock().unwrap().insert(key, seeded.r);
    Ok(seeded.r)
}

// ---------------------------------------------------------------------------
// Full-membrane eigenvalues
// ---------------------------------------------------------------------------

struct BoundaryEval {
    value: f64,
    scale: f64,
    r: f64,
}

fn boundary_value(
    geometry: &EllipseGeometry,
    kind: AngularKind,
    g: u32,
    lambda: f64,
    r_hint: Option<f64>,
) -> Result<BoundaryEval> {
    let h = lambda * geometry.c;
    let r = resolve_charval(kind, g, h, r_hint)?;
    let coeff = RadialCoefficient { h2: h * h, r };
    let init: (f64, f64) = match kind {
        AngularKind::Odd => (0.0, 1.0),
        AngularKind::Even => (1.0, 0.0),
    };
    let mut max_abs: f64 = init.0.abs();
    let (q_end, _) = integrate_observed(&coeff, 0.0, init, geometry.theta, RADIAL_STEPS, |_, q, _| {
        max_abs = max_abs.max(q.abs());
    });
    Ok(BoundaryEval { value: q_end, scale: max_abs.max(f64::MIN_POSITIVE), r })
}

/// Scan for the first `count` sign-change brackets of the boundary value.
fn scan_brackets(
    geometry: &EllipseGeometry,
    kind: AngularKind,
    g: u32,
    step: f64,
    count: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut brackets = Vec::new();
    let mut lam = 0.5 * step;
    let mut prev = boundary_value(geometry, kind, g, lam, None)?;
    let mut prev_lam = lam;
    for _ in 0..SCAN_PROBE_CEILING {
        lam += step;
        let cur = boundary_value(geometry, kind, g, lam, Some(prev.r))?;
        if prev.value == 0.0 || prev.value.signum() != cur.value.signum() {
            brackets.push((prev_lam, lam));
            if brackets.len() >= count {
                return Ok(brackets);
            }
        }
        prev_lam = lam;
        prev = cur;
    }
    Err(Error::ScanExhausted { ceiling: lam, index: count as u32 })
}

fn refine_lambda(
    geometry: &EllipseGeometry,
    kind: AngularKind,
    g: u32,
    bracket: (f64, f64),
    tol: f64,
) -> Result<(f64, f64, f64)> {
    let (mut a, mut b) = bracket;
    let mut ea = boundary_value(geometry, kind, g, a, None)?;
    let mut hint = ea.r;
    loop {
        let mid = 0.5 * (a + b);
        let em = boundary_value(geometry, kind, g, mid, Some(hint))?;
        hint = em.r;
        if em.value == 0.0 || (b - a) < 1e-13 * b.max(1.0) {
            // converged: residual check against the amplitude scale
            let resid = em.value.abs() / em.scale;
            if resid > tol {
                return Err(Error::TolUnachievable { tol, best: resid });
            }
            return Ok((mid, em.r, em.scale));
        }
        if em.value.signum() == ea.value.signum() {
            a = mid;
            ea = em;
        } else {
            b = mid;
        }
    }
}

fn assemble_mode(
    geometry: &EllipseGeometry,
    spec: ModeSpec,
    lambda: f64,
) -> Result<MembraneMode> {
    let h = lambda * geometry.c;
    let r = resolve_charval(spec.kind, spec.order, h, None)?;
    let cv = CharacteristicValue {
        r,
        kind: spec.kind,
        order: spec.order,
        h,
        method: CharvalMethod::Shooting,
    };
    let angular = AngularFunction::new(&cv)?;
    let radial = RadialFunction::from_angular(&angular, geometry.theta)?;
    Ok(MembraneMode {
        spec,
        lambda,
        cv,
        geometry: *geometry,
        angular: Arc::new(angular),
        radial: Arc::new(RadialShape::Full(radial)),
    })
}

/// The `i`-th eigenvalue for `(kind, g)` on the given geometry.
pub fn find_lambda(
    geometry: &EllipseGeometry,
    kind: AngularKind,
    g: u32,
    index: u32,
    tol: f64,
) -> Result<MembraneMode> {
    let spec = ModeSpec::new(kind, g, index)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let semi_major = geometry.semi_major();
    let idx = index as usize - 1;
    let mut step = PI / (4.0 * semi_major);
    let mut brackets = scan_brackets(geometry, kind, g, step, index as usize)?;
    // Doubled-resolution rescan: strongly eccentric membranes may bunch roots.
    // A skipped root shows up as the i-th bracket of the finer scan falling
    // below the coarse one; keep halving until the bracket is stable.
    if geometry.eccentricity() >= 0.5 {
        for _ in 0..3 {
            let finer = scan_brackets(geometry, kind, g, step * 0.5, index as usize)?;
            let mid = 0.5 * (finer[idx].0 + finer[idx].1);
            let stable = mid >= brackets[idx].0 - 0.25 * step && mid <= brackets[idx].1 + 0.25 * step;
            brackets = finer;
            step *= 0.5;
            if stable {
                break;
            }
        }
    }
    let (lambda, _, _) = refine_lambda(geometry, kind, g, brackets[idx], tol)?;
    assemble_mode(geometry, spec, lambda)
}

/// Relative eigenvalue split `|lambda_even - lambda_odd| / lambda_even` of the
/// near-degenerate pair at `(g, i)`.
pub fn degenerate_pair_gap(geometry: &EllipseGeometry, g: u32, index: u32) -> Result<f64> {
    if g == 0 {
        return Err(Error::InvalidInput("degenerate pairs need g >= 1".into()));
    }
    let even = find_lambda(geometry, AngularKind::Even, g, index, 1e-9)?;
    let odd = find_lambda(geometry, AngularKind::Odd, g, index, 1e-9)?;
    Ok((even.lambda - odd.lambda).abs() / even.lambda)
}

/// Finite-difference probe of `dR/dh - 4h` (negative in the regime where the
/// nodal-ellipse count theorem is honest).
pub fn charval_slope_check(g: u32, kind: AngularKind, h: f64, dh: f64) -> Result<f64> {
    if !(dh > 0.0) || dh >= h {
        return Err(Error::InvalidInput(format!("need 0 < dh < h, got dh = {dh}, h = {h}")));
    }
    let hi = charval_shoot(g, kind, h + dh, CHARVAL_TOL)?;
    let lo = charval_shoot(g, kind, h - dh, CHARVAL_TOL)?;
    Ok((hi.r - lo.r) / (2.0 * dh) - 4.0 * h)
}

// ---------------------------------------------------------------------------
// Circular membrane reference
// ---------------------------------------------------------------------------

/// One mode of the circular membrane: `tau` is a root of the radial boundary
/// series, `lambda = tau / radius`, and `tau = j_{n,s} / 2` in terms of the
/// classical Bessel zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMode {
    pub order: u32,
    pub index: u32,
    pub tau: f64,
    pub lambda: f64,
}

/// Boundary series of the circle: `1 - t^2/(1(n+1)) + t^4/(1*2(n+1)(n+2)) - ...`,
/// with a certified alternating tail bound.
fn circle_series(n: u32, tau: f64) -> (f64, f64) {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut bound = 0.0f64;
    let t2 = tau * tau;
    for k in 1..500 {
        term *= -t2 / (k as f64 * (n as f64 + k as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-6) && k as f64 > tau {
            bound = term.abs();
            break;
        }
        bound = term.abs();
    }
    (sum, bound)
}

/// First `count` roots of the circle's boundary series for harmonic order `n`.
pub fn circle_modes(radius: f64, n: u32, count: u32) -> Result<Vec<CircleMode>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    if count < 1 {
        return Err(Error::InvalidInput("count must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut tau = 0.05;
    let step = 0.1;
    let (mut prev, _) = circle_series(n, tau);
    while out.len() < count as usize {
        let next_tau = tau + step;
        let (cur, _) = circle_series(n, next_tau);
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            let (mut a, mut b, mut fa) = (tau, next_tau, prev);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                let (fm, _) = circle_series(n, mid);
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
                if b - a < 1e-14 * b {
                    break;
                }
            }
            let root = 0.5 * (a + b);
            out.push(CircleMode {
                order: n,
                index: out.len() as u32 + 1,
                tau: root,
                lambda: root / radius,
            });
        }
        tau = next_tau;
        prev = cur;
        if tau > 60.0 {
            return Err(Error::ScanExhausted { ceiling: tau, index: count });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Annulus eigenvalues
// ---------------------------------------------------------------------------

/// Eigenvalue solution on the membrane between two confocal ellipses. The
/// same radial form serves both kinds — they differ only through `R`.
pub fn annulus_find_lambda(
    c: f64,
    theta_inner: f64,
    theta_outer: f64,
    kind: AngularKind,
    g: u32,
    index: u32,
    tol: f64,
) -> Result<MembraneMode> {
    let spec = ModeSpec::new(kind, g, index)?;
    if !(theta_inner > 0.0 && theta_outer > theta_inner) {
        return Err(Error::InvalidInput(format!(
            "need 0 < theta_inner < theta_outer, got {theta_inner}, {theta_outer}"
        )));
    }
    let geometry = EllipseGeometry::new(c, theta_outer)?;
    let eps_outer = theta_outer - theta_inner;
    let charval = |lambda: f64, hint: Option<f64>| -> Result<f64> {
        resolve_charval(kind, g, lambda * c, hint)
    };
    let (lambda, r) = annulus_lambda_search(
        |lambda, hint| {
            let r = charval(lambda, hint)?;
            let param = annulus_from_geometry(c, theta_inner, lambda)?;
            let (value, scale) =
                crate::radial::annulus_boundary_value(param.f, param.q_ann, r, eps_outer, RADIAL_STEPS);
            Ok((value, scale.max(f64::MIN_POSITIVE), r))
        },
        geometry.semi_major(),
        index,
        tol,
    )?;
    let h = lambda * c;
    let cv = CharacteristicValue { r, kind, order: g, h, method: CharvalMethod::Shooting };
    let angular = AngularFunction::new(&cv)?;
    let param = annulus_from_geometry(c, theta_inner, lambda)?;
    let coeff = crate::radial::annulus_ode_coefficient(param.f, param.q_ann, r);
    let checkpoints = Checkpoints::build(coeff, 0.0, (0.0, 1.0), eps_outer * 1.0625, 1024);
    Ok(MembraneMode {
        spec,
        lambda,
        cv,
        geometry,
        angular: Arc::new(angular),
        radial: Arc::new(RadialShape::Annulus { param, eps_outer, checkpoints }),
    })
}

/// Scan/refine driver shared by the annulus entry points; `eval` returns
/// `(boundary value, amplitude scale, R)`.
fn annulus_lambda_search(
    mut eval: impl FnMut(f64, Option<f64>) -> Result<(f64, f64, f64)>,
    outer_scale: f64,
    index: u32,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let step = PI / (4.0 * outer_scale);
    let mut lam = 0.5 * step;
    let (mut prev, _, mut prev_r) = eval(lam, None)?;
    let mut prev_lam = lam;
    let mut found = 0u32;
    for _ in 0..SCAN_PROBE_CEILING {
        lam += step;
        let (cur, _, r) = eval(lam, Some(prev_r))?;
        if prev != 0.0 && prev.signum() != cur.signum() {
            found += 1;
            if found == index {
                // bisect
                let (mut a, mut b, mut fa) = (prev_lam, lam, prev);
                let mut hint = prev_r;
                loop {
                    let mid = 0.5 * (a + b);
                    let (fm, scale, rm) = eval(mid, Some(hint))?;
                    hint = rm;
                    if fm == 0.0 || (b - a) < 1e-13 * b.max(1.0) {
                        let resid = fm.abs() / scale;
                        if resid > tol {
                            return Err(Error::TolUnachievable { tol, best: resid });
                        }
                        return Ok((mid, rm));
                    }
                    if fm.signum() == fa.signum() {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
            }
        }
        prev = cur;
        prev_r = r;
        prev_lam = lam;
    }
    Err(Error::ScanExhausted { ceiling: lam, index })
}

/// Annulus eigenvalue directly from the shifted-coordinate parameters
/// (`q_ann = 0` is the circular ring, where `h = 2 lambda a sqrt(q) = 0`).
pub fn annulus_find_lambda_params(
    a: f64,
    q_ann: f64,
    eps_outer: f64,
    kind: AngularKind,
    g: u32,
    index: u32,
    tol: f64,
) -> Result<(f64, f64)> {
    ModeSpec::new(kind, g, index)?;
    if !(a > 0.0 && eps_outer > 0.0) || !(0.0..=1.0).contains(&q_ann) {
        return Err(Error::InvalidInput("need a > 0, eps_outer > 0, q in [0,1]".into()));
    }
    let c_eff = 2.0 * a * q_ann.sqrt();
    annulus_lambda_search(
        |lambda, hint| {
            let r = if c_eff == 0.0 {
                (g * g) as f64
            } else {
                resolve_charval(kind, g, lambda * c_eff, hint)?
            };
            let f = 2.0 * lambda * a;
            let (value, scale) =
                crate::radial::annulus_boundary_value(f, q_ann, r, eps_outer, RADIAL_STEPS);
            Ok((value, scale.max(f64::MIN_POSITIVE), r))
        },
        a * eps_outer.exp(),
        index,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_is_linear() {
        let m = MembraneMaterial::new(1.0).unwrap();
        assert!((frequency(PI, &m) - 1.0).abs() < 1e-15);
        let m2 = MembraneMaterial::new(2.0).unwrap();
        assert!((frequency(PI, &m2) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn circle_fundamental() {
        let modes = circle_modes(1.0, 0, 2).unwrap();
        assert!((modes[0].tau - 1.2024127788478865).abs() < 1e-9, "{}", modes[0].tau);
        assert!(modes[0].lambda < modes[1].lambda);
    }

    #[test]
    fn circle_nodal_radii_relation() {
        let modes = circle_modes(2.0, 1, 3).unwrap();
        // nodal circle radii of the s-th mode are tau_k / lambda_s
        let lam3 = modes[2].lambda;
        for k in 0..2 {
            let r = modes[k].tau / lam3;
            assert!(r < 2.0);
        }
    }

    #[test]
    fn near_circle_fundamental_matches_bessel() {
        let geometry = EllipseGeometry::new(0.05, (1.0f64 / 0.05).acosh()).unwrap();
        let mode = find_lambda(&geometry, AngularKind::Even, 0, 1, 1e-9).unwrap();
        let lam_a = mode.lambda * geometry.semi_major();
        let tau = 1.2024127788478865; // j_{0,1}/2 via the series solver
        assert!(
            (lam_a - tau).abs() / tau < 2.0 * geometry.eccentricity().powi(2),
            "lambda*A = {lam_a}"
        );
    }

    #[test]
    fn lambda_increases_with_index() {
        let geometry = EllipseGeometry::new(0.3, (1.0f64 / 0.3).acosh()).unwrap();
        let l1 = find_lambda(&geometry, AngularKind::Even, 1, 1, 1e-9).unwrap().lambda;
        let l2 = find_lambda(&geometry, AngularKind::Even, 1, 2, 1e-9).unwrap().lambda;
        let l3 = find_lambda(&geometry, AngularKind::Even, 1, 3, 1e-9).unwrap().lambda;
        assert!(l1 < l2 && l2 < l3);
    }

    #[test]
    fn first_mode_has_no_interior_roots() {
        let geometry = EllipseGeometry::new(0.3, (1.0f64 / 0.3).acosh()).unwrap();
        let mode = find_lambda(&geometry, AngularKind::Odd, 1, 1, 1e-9).unwrap();
        assert!(mode.radial_interior_roots().is_empty());
    }

    #[test]
    fn slope_check_is_negative_for_small_h() {
        let v = charval_slope_check(2, AngularKind::Even, 0.5, 1e-4).unwrap();
        assert!(v < 0.0, "dR/dh - 4h = {v}");
    }
}
