//! Weighted orthogonality and modal expansion of initial-velocity data.
//!
//! Distinct same-kind modes are orthogonal under the separable weight:
//!
//! ```text
//! integral over [0, theta] x [0, 2 pi] of
//!     [cosh(2 beta) - cos(2 alpha)] P P' Q Q'  d beta d alpha  =  0,
//! ```
//!
//! which follows from cross-multiplying the two separated equations. An
//! initial-velocity field `Phi` (invariant under `(alpha, beta) ->
//! (-alpha, -beta)`, zero on the contour) splits into an odd-odd part `F1`
//! fed to the odd-kind modes and an even-even part `F2` fed to the even kind;
//! the expansion coefficients follow by the weighted projection
//!
//! ```text
//! a = ∫∫ F P Q w / (2 m lambda ∫∫ P^2 Q^2 w).
//! ```

use crate::coords::{EllipseGeometry, EllipticPoint};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre_on;
use crate::spectrum::{MembraneMaterial, MembraneMode, ModeSpec};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

const TAU: f64 = 2.0 * PI;

/// Quadrature convergence tolerance for the automatic order doubling.
const QUAD_TOL: f64 = 1e-9;

/// Sampling tolerance for the `(-alpha, -beta)` invariance check.
const SYMMETRY_TOL: f64 = 1e-9;

type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// An initial-velocity field over the membrane, tied to its geometry.
#[derive(Clone)]
pub struct VelocityField {
    pub geometry: EllipseGeometry,
    eval_fn: FieldFn,
    /// Declared smoothness hint (continuous derivatives), informational.
    pub smoothness: u32,
    pub boundary_vanishing: bool,
}

impl VelocityField {
    pub fn from_fn(
        geometry: EllipseGeometry,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { geometry, eval_fn: Arc::new(f), smoothness: u32::MAX, boundary_vanishing: true }
    }

    /// Named analytic test fields, all functions of `(x, y)` (hence
    /// automatically invariant under the coordinate identification):
    /// `bump` — the paraboloid cap `1 - (x/A)^2 - (y/B)^2`;
    /// `xy-bump` — the same cap times `x y` (odd-odd content);
    /// `dome` — cosine cap over the boundary ellipse.
    pub fn builtin(name: &str, geometry: EllipseGeometry) -> Result<Self> {
        let a = geometry.semi_major();
        let b = geometry.semi_minor();
        let c = geometry.c;
        let cap = move |alpha: f64, beta: f64| {
            let x = c * beta.cosh() * alpha.cos();
            let y = c * beta.sinh() * alpha.sin();
            1.0 - (x / a).powi(2) - (y / b).powi(2)
        };
        let field: FieldFn = match name {
            "bump" => Arc::new(cap),
            "xy-bump" => Arc::new(move |alpha: f64, beta: f64| {
                let x = c * beta.cosh() * alpha.cos();
                let y = c * beta.sinh() * alpha.sin();
                x * y * cap(alpha, beta)
            }),
            "dome" => Arc::new(move |alpha: f64, beta: f64| {
                let r2 = 1.0 - cap(alpha, beta);
                (0.5 * PI * r2.min(1.0)).cos()
            }),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown builtin field '{name}' (have: bump, xy-bump, dome)"
                )))
            }
        };
        Ok(Self { geometry, eval_fn: field, smoothness: u32::MAX, boundary_vanishing: true })
    }

    /// Field sampled on a uniform `(alpha, beta)` grid, evaluated by bicubic
    /// (Catmull–Rom) interpolation, periodic in `alpha` and clamped in `beta`.
    pub fn from_grid(geometry: EllipseGeometry, grid: GridData) -> Result<Self> {
        grid.validate()?;
        let g = Arc::new(grid);
        Ok(Self {
            geometry,
            eval_fn: Arc::new(move |alpha, beta| g.interpolate(alpha, beta)),
            smoothness: 2,
            boundary_vanishing: true,
        })
    }

    pub fn eval(&self, p: EllipticPoint) -> f64 {
        (self.eval_fn)(p.alpha, p.beta)
    }

    fn eval_raw(&self, alpha: f64, beta: f64) -> f64 {
        (self.eval_fn)(alpha, beta)
    }

    /// Largest sampled magnitude on the contour `beta = theta`; a field fed
    /// to the expansion should vanish there.
    pub fn boundary_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for k in 0..64 {
            let alpha = k as f64 * TAU / 64.0;
            dev = dev.max(self.eval_raw(alpha, self.geometry.theta).abs());
        }
        dev
    }

    /// Largest deviation from the `(-alpha, -beta)` invariance on a sample
    /// grid. For a field given on canonical coordinates the invariance is
    /// exactly the seam consistency on the inter-focal segment, where
    /// `(alpha, 0)` and `(2 pi - alpha, 0)` address the same point.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for ka in 0..33 {
            let alpha = ka as f64 * TAU / 33.0 + 0.017;
            let direct = self.eval_raw(alpha, 0.0);
            let canon = EllipticPoint::new(-alpha, -0.0).unwrap();
            let mirrored = self.eval_raw(canon.alpha, canon.beta);
            dev = dev.max((direct - mirrored).abs());
        }
        dev
    }
}

impl std::fmt::Debug for VelocityField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VelocityField").field("geometry", &self.geometry).finish()
    }
}

/// Uniform sample grid `(alpha_i, beta_j) -> value`.
#[derive(Debug, Clone)]
pub struct GridData {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub beta_max: f64,
    /// Row-major `values[i * n_beta + j]` with `alpha_i = i * 2 pi / n_alpha`,
    /// `beta_j = j * beta_max / (n_beta - 1)`.
    pub values: Vec<f64>,
}

impl GridData {
    fn validate(&self) -> Result<()> {
        if self.n_alpha < 4 || self.n_beta < 4 {
            return Err(Error::InvalidInput("grid needs at least 4 x 4 samples".into()));
        }
        if self.values.len() != self.n_alpha * self.n_beta {
            return Err(Error::InvalidInput(format!(
                "grid size mismatch: {} values for {} x {}",
                self.values.len(),
                self.n_alpha,
                self.n_beta
            )));
        }
        if !(self.beta_max > 0.0) {
            return Err(Error::InvalidInput("beta_max must be positive".into()));
        }
        Ok(())
    }

    fn at(&self, i: isize, j: isize) -> f64 {
        let i = i.rem_euclid(self.n_alpha as isize) as usize;
        let j = j.clamp(0, self.n_beta as isize - 1) as usize;
        self.values[i * self.n_beta + j]
    }

    fn interpolate(&self, alpha: f64, beta: f64) -> f64 {
        let fa = alpha.rem_euclid(TAU) / TAU * self.n_alpha as f64;
        let fb = (beta / self.beta_max).clamp(0.0, 1.0) * (self.n_beta - 1) as f64;
        let ia = fa.floor() as isize;
        let ib = fb.floor().min((self.n_beta - 2) as f64) as isize;
        let ta = fa - ia as f64;
        let tb = fb - ib as f64;
        let mut rows = [0.0; 4];
        for (r, row) in rows.iter_mut().enumerate() {
            let j = ib - 1 + r as isize;
            let p = [
                self.at(ia - 1, j),
                self.at(ia, j),
                self.at(ia + 1, j),
                self.at(ia + 2, j),
            ];
            *row = catmull_rom(p, ta);
        }
        catmull_rom(rows, tb)
    }
}

fn catmull_rom(p: [f64; 4], t: f64) -> f64 {
    0.5 * ((2.0 * p[1])
        + (-p[0] + p[2]) * t
        + (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t * t
        + (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t * t * t)
}

/// Split into the odd-odd part `F1` (feeding the odd kind) and the even-even
/// part `F2`; requires the `(-alpha, -beta)` invariance and reconstructs the
/// field exactly: `F1 + F2 = Phi`.
pub fn split_even_odd(field: &VelocityField) -> Result<(VelocityField, VelocityField)> {
    let dev = field.symmetry_deviation();
    if dev > SYMMETRY_TOL {
        return Err(Error::FieldSymmetryViolation { deviation: dev });
    }
    let f1_src = field.clone();
    let f1 = VelocityField {
        geometry: field.geometry,
        eval_fn: Arc::new(move |alpha: f64, beta: f64| {
            0.5 * (f1_src.eval_raw(alpha, beta) - f1_src.eval_raw((-alpha).rem_euclid(TAU), beta))
        }),
        smoothness: field.smoothness,
        boundary_vanishing: field.boundary_vanishing,
    };
    let f2_src = field.clone();
    let f2 = VelocityField {
        geometry: field.geometry,
        eval_fn: Arc::new(move |alpha: f64, beta: f64| {
            0.5 * (f2_src.eval_raw(alpha, beta) + f2_src.eval_raw((-alpha).rem_euclid(TAU), beta))
        }),
        smoothness: field.smoothness,
        boundary_vanishing: field.boundary_vanishing,
    };
    Ok((f1, f2))
}

// ---------------------------------------------------------------------------
// Weighted inner products
// ---------------------------------------------------------------------------

fn tensor_integral(
    geometry: &EllipseGeometry,
    order: usize,
    integrand: &dyn Fn(f64, f64, f64) -> f64,
) -> f64 {
    let (xa, wa) = gauss_legendre_on(order, 0.0, TAU);
    let (xb, wb) = gauss_legendre_on(order, 0.0, geometry.theta);
    let mut acc = 0.0;
    for (&beta, &wbj) in xb.iter().zip(&wb) {
        let ch2b = (2.0 * beta).cosh();
        let mut inner = 0.0;
        for (&alpha, &wai) in xa.iter().zip(&wa) {
            let weight = ch2b - (2.0 * alpha).cos();
            inner += wai * integrand(alpha, beta, weight);
        }
        acc += wbj * inner;
    }
    acc
}

/// Tensor Gauss–Legendre with automatic order doubling until two successive
/// results agree to `tol` relative (`1e-9` for analytic integrands; sampled
/// fields with limited smoothness get a looser target).
fn converged_integral(
    geometry: &EllipseGeometry,
    base_order: usize,
    tol: f64,
    integrand: &dyn Fn(f64, f64, f64) -> f64,
) -> Result<f64> {
    let mut order = base_order.max(8);
    let mut prev = tensor_integral(geometry, order, integrand);
    let mut disagreement = f64::INFINITY;
    for _ in 0..3 {
        order *= 2;
        let cur = tensor_integral(geometry, order, integrand);
        let scale = cur.abs().max(prev.abs()).max(1e-300);
        disagreement = (cur - prev).abs() / scale.max(1.0);
        if disagreement <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged { disagreement, tol })
}

/// Convergence target for integrands involving the field: an interpolated
/// grid is only piecewise-smooth and cannot reach the analytic target.
fn field_quad_tol(field: &VelocityField) -> f64 {
    if field.smoothness >= 8 {
        QUAD_TOL
    } else {
        1e-6
    }
}

/// Weighted product integral of two same-kind modes; the weight is the
/// separation factor `cosh(2 beta) - cos(2 alpha)`.
pub fn inner_product(a: &MembraneMode, b: &MembraneMode, quad_order: usize) -> Result<f64> {
    if a.geometry != b.geometry {
        return Err(Error::GeometryMismatch);
    }
    if a.spec.kind != b.spec.kind {
        return Err(Error::InvalidInput(
            "the orthogonality relation pairs modes of one kind".into(),
        ));
    }
    converged_integral(&a.geometry, quad_order, QUAD_TOL, &|alpha, beta, w| {
        a.p_eval(alpha) * b.p_eval(alpha) * a.q_eval(beta).q * b.q_eval(beta).q * w
    })
}

/// The two separated cross-identities for a mode pair: returns
/// `((R - R') I0 - 2 (l^2 - l'^2) c^2 I1, 2 (l^2 - l'^2) c^2 J1 - (R - R') J0)`
/// where `I` are the radial and `J` the angular product integrals; both
/// vanish for admissible pairs.
pub fn separated_identities(
    a: &MembraneMode,
    b: &MembraneMode,
    quad_order: usize,
) -> Result<(f64, f64)> {
    if a.geometry != b.geometry {
        return Err(Error::GeometryMismatch);
    }
    let theta = a.geometry.theta;
    let order = quad_order.max(32);
    let (xb, wb) = gauss_legendre_on(order, 0.0, theta);
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    for (&beta, &w) in xb.iter().zip(&wb) {
        let qq = a.q_eval(beta).q * b.q_eval(beta).q;
        i0 += w * qq;
        i1 += w * qq * (2.0 * beta).cosh();
    }
    let (xa, wa) = gauss_legendre_on(order, 0.0, TAU);
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    for (&alpha, &w) in xa.iter().zip(&wa) {
        let pp = a.p_eval(alpha) * b.p_eval(alpha);
        j0 += w * pp;
        j1 += w * pp * (2.0 * alpha).cos();
    }
    let dr = a.cv.r - b.cv.r;
    let dl2c2 = 2.0 * (a.lambda * a.lambda - b.lambda * b.lambda) * a.geometry.c * a.geometry.c;
    Ok((dr * i0 - dl2c2 * i1, dl2c2 * j1 - dr * j0))
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

/// Modal expansion of an initial-velocity field.
pub struct ModalExpansion {
    pub odd_coeffs: BTreeMap<ModeSpec, f64>,
    pub even_coeffs: BTreeMap<ModeSpec, f64>,
    /// Weighted L2 norm of `Phi - d/dt (reconstruction)` at `t = 0`.
    pub residual_norm: f64,
    modes: Vec<Arc<MembraneMode>>,
    coeffs: Vec<f64>,
}

impl std::fmt::Debug for ModalExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModalExpansion")
            .field("odd_coeffs", &self.odd_coeffs)
            .field("even_coeffs", &self.even_coeffs)
            .field("residual_norm", &self.residual_norm)
            .finish()
    }
}

/// Project the field onto each mode: odd-kind modes receive the odd-odd part,
/// even-kind modes the even-even part; cross terms vanish by orthogonality.
pub fn expand_velocity(
    field: &VelocityField,
    modes: &[Arc<MembraneMode>],
    material: &MembraneMaterial,
    quad_order: usize,
) -> Result<ModalExpansion> {
    for m in modes {
        if m.geometry != field.geometry {
            return Err(Error::GeometryMismatch);
        }
    }
    if field.boundary_vanishing {
        let dev = field.boundary_deviation();
        // scale against an interior sample
        let mid = field.eval_raw(0.9, 0.5 * field.geometry.theta).abs();
        if dev > 1e-6 * mid.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "field declared boundary-vanishing but |phi| reaches {dev:.3e} on the contour"
            )));
        }
    }
    let (f1, f2) = split_even_odd(field)?;
    let geometry = field.geometry;
    let mut odd_coeffs = BTreeMap::new();
    let mut even_coeffs = BTreeMap::new();
    let mut coeffs = Vec::with_capacity(modes.len());
    for mode in modes {
        let part = if mode.spec.kind.is_odd() { &f1 } else { &f2 };
        let numer = converged_integral(&geometry, quad_order, field_quad_tol(field), &|alpha, beta, w| {
            part.eval_raw(alpha, beta) * mode.p_eval(alpha) * mode.q_eval(beta).q * w
        })?;
        let denom = converged_integral(&geometry, quad_order, QUAD_TOL, &|alpha, beta, w| {
            let pq = mode.p_eval(alpha) * mode.q_eval(beta).q;
            pq * pq * w
        })?;
        let coeff = numer / (2.0 * material.wave_speed * mode.lambda * denom);
        coeffs.push(coeff);
        if mode.spec.kind.is_odd() {
            odd_coeffs.insert(mode.spec, coeff);
        } else {
            even_coeffs.insert(mode.spec, coeff);
        }
    }
    // residual of the t-derivative at t = 0 against the field
    let modes_ref: Vec<Arc<MembraneMode>> = modes.to_vec();
    let coeffs_ref = coeffs.clone();
    let m = material.wave_speed;
    let residual_sq = converged_integral(&geometry, quad_order, field_quad_tol(field), &|alpha, beta, w| {
        let mut recon = 0.0;
        for (mode, &c) in modes_ref.iter().zip(&coeffs_ref) {
            recon += 2.0 * m * mode.lambda * c * mode.p_eval(alpha) * mode.q_eval(beta).q;
        }
        let diff = field.eval_raw(alpha, beta) - recon;
        diff * diff * w
    })?;
    Ok(ModalExpansion {
        odd_coeffs,
        even_coeffs,
        residual_norm: residual_sq.max(0.0).sqrt(),
        modes: modes_ref,
        coeffs,
    })
}

/// Displacement at `(p, t)` of the expanded motion:
/// `w = sum a P1 Q1 sin(2 lambda m t) + sum b P2 Q2 sin(2 lambda' m t)`.
pub fn evaluate_motion(
    expansion: &ModalExpansion,
    p: EllipticPoint,
    t: f64,
    material: &MembraneMaterial,
) -> f64 {
    let m = material.wave_speed;
    expansion
        .modes
        .iter()
        .zip(&expansion.coeffs)
        .map(|(mode, &c)| {
            c * mode.p_eval(p.alpha) * mode.q_eval(p.beta).q * (2.0 * mode.lambda * m * t).sin()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry() -> EllipseGeometry {
        EllipseGeometry::new(0.3, (1.0f64 / 0.3).acosh()).unwrap()
    }

    #[test]
    fn split_reconstructs_pointwise() {
        let field = VelocityField::builtin("xy-bump", geometry()).unwrap();
        let (f1, f2) = split_even_odd(&field).unwrap();
        for ka in 0..8 {
            for kb in 0..8 {
                let p = EllipticPoint::new(ka as f64 * 0.7, kb as f64 * 0.2).unwrap();
                let total = f1.eval(p) + f2.eval(p);
                assert!((total - field.eval(p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn split_kills_pure_parities() {
        let even = VelocityField::builtin("bump", geometry()).unwrap();
        let (f1, _) = split_even_odd(&even).unwrap();
        let p = EllipticPoint::new(1.1, 0.8).unwrap();
        assert!(f1.eval(p).abs() < 1e-14);

        let odd = VelocityField::builtin("xy-bump", geometry()).unwrap();
        let (_, f2) = split_even_odd(&odd).unwrap();
        assert!(f2.eval(p).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_field_rejected() {
        let g = geometry();
        // a raw function of alpha alone is inconsistent where (alpha, 0) and
        // (2 pi - alpha, 0) are the same point
        let field = VelocityField::from_fn(g, |alpha, _| alpha);
        assert!(matches!(
            split_even_odd(&field),
            Err(Error::FieldSymmetryViolation { .. })
        ));
    }

    #[test]
    fn grid_interpolation_reproduces_smooth_field() {
        let g = geometry();
        let (na, nb) = (64, 48);
        let mut values = vec![0.0; na * nb];
        let f = |alpha: f64, beta: f64| (alpha.cos() * beta.cosh()).sin();
        for i in 0..na {
            for j in 0..nb {
                let alpha = i as f64 * TAU / na as f64;
                let beta = j as f64 * g.theta / (nb - 1) as f64;
                values[i * nb + j] = f(alpha, beta);
            }
        }
        let grid = GridData { n_alpha: na, n_beta: nb, beta_max: g.theta, values };
        let field = VelocityField::from_grid(g, grid).unwrap();
        for &(alpha, beta) in &[(0.37, 0.41), (2.9, 1.2), (5.5, 0.05)] {
            let p = EllipticPoint::new(alpha, beta).unwrap();
            assert!((field.eval(p) - f(alpha, beta)).abs() < 5e-4);
        }
    }
}
