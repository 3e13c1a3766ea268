//! Fixed-step Taylor integrator for linear second-order equations
//! `y'' = w(x) y` with an analytically known coefficient `w`.
//!
//! Each step expands the solution in a local Taylor series of fixed degree;
//! the coefficient recurrence
//!
//! ```text
//! y[n+2] = (sum_j w[j] y[n-j]) / ((n+1)(n+2))
//! ```
//!
//! needs only the local Taylor coefficients `w[j]` of the potential. With
//! degree 12 this is a one-step method of order 12, deterministic for a fixed
//! step count, and cheap because the potentials here are trigonometric or
//! exponential and shift exactly.

/// Degree of the local expansion (order of the one-step method).
pub const TAYLOR_DEGREE: usize = 12;

const NC: usize = TAYLOR_DEGREE + 1;

/// Supplies the local Taylor coefficients of `w` about `x`:
/// `w(x + d) = sum_j out[j] d^j`.
pub trait Coefficient {
    fn taylor_at(&self, x: f64, out: &mut [f64; NC]);
}

/// `w(x) = 2 h^2 cos(2x) - r` — the angular equation `P'' + (R - 2h^2 cos 2a)P = 0`
/// written as `P'' = w P`. `potential_sign = -1` solves the sign-flipped
/// potential `P'' + (R + 2h^2 cos 2a)P = 0`.
#[derive(Clone, Copy)]
pub struct AngularCoefficient {
    pub h2: f64,
    pub r: f64,
    pub potential_sign: f64,
}

impl Coefficient for AngularCoefficient {
    fn taylor_at(&self, x: f64, out: &mut [f64; NC]) {
        let (s, c) = (2.0 * x).sin_cos();
        let amp = 2.0 * self.h2 * self.potential_sign;
        // d^j cos(2x) = 2^j * cycle(cos, -sin, -cos, sin)
        let cycle = [c, -s, -c, s];
        let mut pow = 1.0;
        let mut fact = 1.0;
        for (j, slot) in out.iter_mut().enumerate() {
            if j > 0 {
                pow *= 2.0;
                fact *= j as f64;
            }
            *slot = amp * pow * cycle[j % 4] / fact;
        }
        out[0] -= self.r;
    }
}

/// `w(x) = r - 2 h^2 cosh(2x)` — the radial equation `Q'' = (R - 2h^2 cosh 2b)Q`.
#[derive(Clone, Copy)]
pub struct RadialCoefficient {
    pub h2: f64,
    pub r: f64,
}

impl Coefficient for RadialCoefficient {
    fn taylor_at(&self, x: f64, out: &mut [f64; NC]) {
        let e = (2.0 * x).exp();
        let (ch, sh) = (0.5 * (e + 1.0 / e), 0.5 * (e - 1.0 / e));
        let mut pow = 1.0;
        let mut fact = 1.0;
        for (j, slot) in out.iter_mut().enumerate() {
            if j > 0 {
                pow *= 2.0;
                fact *= j as f64;
            }
            *slot = -2.0 * self.h2 * pow * if j % 2 == 0 { ch } else { sh } / fact;
        }
        out[0] += self.r;
    }
}

/// `w(x) = r - f^2 (e^{2x} + weight e^{-2x})` — annular radial equation in the
/// shifted coordinate; `weight` is the coefficient on the decaying exponential.
#[derive(Clone, Copy)]
pub struct AnnulusCoefficient {
    pub f2: f64,
    pub weight: f64,
    pub r: f64,
}

impl Coefficient for AnnulusCoefficient {
    fn taylor_at(&self, x: f64, out: &mut [f64; NC]) {
        let ep = (2.0 * x).exp();
        let em = 1.0 / ep;
        let mut pow = 1.0;
        let mut fact = 1.0;
        for (j, slot) in out.iter_mut().enumerate() {
            if j > 0 {
                pow *= 2.0;
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *slot = -self.f2 * (pow * ep + sign * pow * self.weight * em) / fact;
        }
        out[0] += self.r;
    }
}

/// One Taylor step of length `dx` from `(y, dy)` at `x`.
pub fn step<C: Coefficient>(coeff: &C, x: f64, y: f64, dy: f64, dx: f64) -> (f64, f64) {
    let mut w = [0.0; NC];
    coeff.taylor_at(x, &mut w);
    let mut p = [0.0; NC + 2];
    p[0] = y;
    p[1] = dy;
    for n in 0..NC {
        let mut acc = 0.0;
        for j in 0..=n {
            acc += w[j] * p[n - j];
        }
        p[n + 2] = acc / (((n + 1) * (n + 2)) as f64);
    }
    // Horner for y and y'
    let mut v = 0.0;
    let mut d = 0.0;
    for n in (0..NC + 2).rev() {
        v = v * dx + p[n];
        if n >= 1 {
            d = d * dx + n as f64 * p[n];
        }
    }
    (v, d)
}

/// Integrate from `x0` to `x1` in `steps` equal steps; returns `(y, dy)` at `x1`.
pub fn integrate<C: Coefficient>(
    coeff: &C,
    x0: f64,
    init: (f64, f64),
    x1: f64,
    steps: usize,
) -> (f64, f64) {
    let dx = (x1 - x0) / steps as f64;
    let (mut y, mut dy) = init;
    for k in 0..steps {
        let x = x0 + k as f64 * dx;
        let (ny, ndy) = step(coeff, x, y, dy, dx);
        y = ny;
        dy = ndy;
    }
    (y, dy)
}

/// Monitoring variant: reports the state after every step through `observe(x_end, y, dy)`.
pub fn integrate_observed<C: Coefficient>(
    coeff: &C,
    x0: f64,
    init: (f64, f64),
    x1: f64,
    steps: usize,
    mut observe: impl FnMut(f64, f64, f64),
) -> (f64, f64) {
    let dx = (x1 - x0) / steps as f64;
    let (mut y, mut dy) = init;
    for k in 0..steps {
        let x = x0 + k as f64 * dx;
        let (ny, ndy) = step(coeff, x, y, dy, dx);
        y = ny;
        dy = ndy;
        observe(x0 + (k + 1) as f64 * dx, y, dy);
    }
    (y, dy)
}

/// Dense representation: checkpoints every `dx` so later point evaluations
/// need only one local Taylor step of length `< dx`.
pub struct Checkpoints<C: Coefficient> {
    coeff: C,
    x0: f64,
    dx: f64,
    states: Vec<(f64, f64)>,
}

impl<C: Coefficient> Checkpoints<C> {
    pub fn build(coeff: C, x0: f64, init: (f64, f64), x1: f64, steps: usize) -> Self {
        let dx = (x1 - x0) / steps as f64;
        let mut states = Vec::with_capacity(steps + 1);
        states.push(init);
        let (mut y, mut dy) = init;
        for k in 0..steps {
            let x = x0 + k as f64 * dx;
            let (ny, ndy) = step(&coeff, x, y, dy, dx);
            y = ny;
            dy = ndy;
            states.push((y, dy));
        }
        Self { coeff, x0, dx, states }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.states.len() - 1) as f64
    }

    /// Value and derivative at `x`, which must lie in `[x0, x_max]` up to
    /// a small overhang handled by one extrapolating step.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let idx = (((x - self.x0) / self.dx).floor() as isize)
            .clamp(0, self.states.len() as isize - 1) as usize;
        let xk = self.x0 + idx as f64 * self.dx;
        let (y, dy) = self.states[idx];
        if x == xk {
            return (y, dy);
        }
        step(&self.coeff, xk, y, dy, x - xk)
    }

    /// Largest |y| over the stored checkpoints — a natural residual scale.
    pub fn max_abs(&self) -> f64 {
        self.states.iter().fold(0.0, |m, s| m.max(s.0.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cosine_at_h_zero() {
        // P'' + 4 P = 0, P(0)=1, P'(0)=0 -> cos(2a)
        let c = AngularCoefficient { h2: 0.0, r: 4.0, potential_sign: 1.0 };
        let (y, dy) = integrate(&c, 0.0, (1.0, 0.0), 1.3, 256);
        assert!((y - (2.6f64).cos()).abs() < 1e-14);
        assert!((dy + 2.0 * (2.6f64).sin()).abs() < 1e-13);
    }

    #[test]
    fn reproduces_sinh_at_h_zero() {
        // Q'' = 9 Q, Q(0)=0, Q'(0)=3 -> sinh(3b)
        let c = RadialCoefficient { h2: 0.0, r: 9.0 };
        let (y, _) = integrate(&c, 0.0, (0.0, 3.0), 1.1, 256);
        assert!((y - (3.3f64).sinh()).abs() < 1e-12 * (3.3f64).sinh());
    }

    #[test]
    fn step_halving_consistency() {
        let c = AngularCoefficient { h2: 2.25, r: 9.3, potential_sign: 1.0 };
        let a = integrate(&c, 0.0, (0.0, 1.0), std::f64::consts::PI / 2.0, 512);
        let b = integrate(&c, 0.0, (0.0, 1.0), std::f64::consts::PI / 2.0, 1024);
        assert!((a.0 - b.0).abs() < 1e-13);
    }

    #[test]
    fn checkpoints_match_direct_integration() {
        let c = RadialCoefficient { h2: 1.44, r: 4.2 };
        let cp = Checkpoints::build(c, 0.0, (1.0, 0.0), 1.5, 512);
        let direct = integrate(&c, 0.0, (1.0, 0.0), 0.97, 512);
        let (y, dy) = cp.eval(0.97);
        assert!((y - direct.0).abs() < 1e-12);
        assert!((dy - direct.1).abs() < 1e-11);
    }
}
