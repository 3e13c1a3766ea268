//! Independent brute-force verifiers for the membrane library.
//!
//! Deliberately plain implementations — classical fixed-step RK4 for the two
//! separated equations and bisection on the Bessel ascending series — kept
//! free of any code shared with the production paths they check. The RK4
//! order differs from the production integrator's on purpose.

/// One sample of an integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

fn rk4_second_order(
    rhs: &dyn Fn(f64, f64) -> f64, // y'' = rhs(x, y) (linear: rhs = w(x) * y)
    x0: f64,
    init: (f64, f64),
    x1: f64,
    steps: usize,
) -> Vec<Sample> {
    let h = (x1 - x0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let (mut y, mut dy) = init;
    out.push(Sample { x: x0, y, dy });
    for k in 0..steps {
        let x = x0 + k as f64 * h;
        // state u = (y, dy); u' = (dy, rhs(x, y))
        let (k1y, k1d) = (dy, rhs(x, y));
        let (k2y, k2d) = (dy + 0.5 * h * k1d, rhs(x + 0.5 * h, y + 0.5 * h * k1y));
        let (k3y, k3d) = (dy + 0.5 * h * k2d, rhs(x + 0.5 * h, y + 0.5 * h * k2y));
        let (k4y, k4d) = (dy + h * k3d, rhs(x + h, y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        out.push(Sample { x: x0 + (k + 1) as f64 * h, y, dy });
    }
    out
}

/// RK4 trajectory of the angular equation `P'' + (R - 2h^2 cos 2a) P = 0`.
pub fn integrate_angular(
    h: f64,
    r: f64,
    init: (f64, f64),
    alpha_span: (f64, f64),
    steps: usize,
) -> Vec<Sample> {
    assert!(steps >= 512, "oracle resolution floor");
    let h2 = h * h;
    rk4_second_order(
        &move |x: f64, y: f64| -(r - 2.0 * h2 * (2.0 * x).cos()) * y,
        alpha_span.0,
        init,
        alpha_span.1,
        steps,
    )
}

/// RK4 trajectory of the radial equation `Q'' - (R - 2h^2 cosh 2b) Q = 0`.
pub fn integrate_radial(
    h: f64,
    r: f64,
    init: (f64, f64),
    beta_span: (f64, f64),
    steps: usize,
) -> Vec<Sample> {
    assert!(steps >= 512, "oracle resolution floor");
    let h2 = h * h;
    rk4_second_order(
        &move |x: f64, y: f64| (r - 2.0 * h2 * (2.0 * x).cosh()) * y,
        beta_span.0,
        init,
        beta_span.1,
        steps,
    )
}

/// Step-halving error estimate at the endpoint of the angular integration.
pub fn angular_error_estimate(h: f64, r: f64, init: (f64, f64), span: (f64, f64), steps: usize) -> f64 {
    let coarse = integrate_angular(h, r, init, span, steps);
    let fine = integrate_angular(h, r, init, span, steps * 2);
    let a = coarse.last().unwrap().y;
    let b = fine.last().unwrap().y;
    // RK4 halving: error of the fine result ~ |a - b| / 15
    (a - b).abs() / 15.0
}

/// Step-halving error estimate for the radial integration.
pub fn radial_error_estimate(h: f64, r: f64, init: (f64, f64), span: (f64, f64), steps: usize) -> f64 {
    let coarse = integrate_radial(h, r, init, span, steps);
    let fine = integrate_radial(h, r, init, span, steps * 2);
    (coarse.last().unwrap().y - fine.last().unwrap().y).abs() / 15.0
}

/// Bessel function of integer order by its ascending series,
/// `J_n(x) = sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!)`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // leading term (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    for k in 1..400 {
        term *= -(half * half) / (k as f64 * (n as f64 + k as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) && (k as f64) > x {
            break;
        }
    }
    sum
}

/// `s`-th positive zero of `J_n` by scan plus bisection on the series.
pub fn bessel_zero(n: u32, s: u32) -> f64 {
    assert!(s >= 1);
    let mut x = n as f64 * 0.5 + 0.5;
    let step = 0.05;
    let mut found = 0;
    let mut prev = bessel_j(n, x);
    loop {
        let nx = x + step;
        let cur = bessel_j(n, nx);
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            found += 1;
            if found == s {
                let (mut a, mut b, mut fa) = (x, nx, prev);
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    let fm = bessel_j(n, mid);
                    if fm == 0.0 {
                        return mid;
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
                return 0.5 * (a + b);
            }
        }
        prev = cur;
        x = nx;
        assert!(x < 500.0, "zero scan ran away");
    }
}

/// Reference polynomials for the annular radial solution's derivatives at the
/// inner contour, `(1/B) d^n Q / d eps^n` as functions of `(f, q, R)`,
/// transcribed from the historical table with two digit-level repairs that
/// the defining equation forces: entry 6 carries `12 f^4 (1 - q^2)` (printed
/// `(1+q)^2`) and entry 11 carries `10 R^3 (1+q)^2` (printed `10 R`).
pub fn annulus_table_derivative(n: usize, f: f64, q: f64, r: f64) -> f64 {
    let f2 = f * f;
    let f4 = f2 * f2;
    let f6 = f4 * f2;
    let f8 = f6 * f2;
    let p = 1.0 + q;
    match n {
        3 => -f2 * p + r,
        4 => -4.0 * f2 * (1.0 - q),
        5 => f4 * p * p - 2.0 * f2 * (r + 6.0) * p + r * r,
        6 => 12.0 * f4 * (1.0 - q * q) - 4.0 * f2 * (1.0 - q) * (3.0 * r + 8.0),
        7 => {
            -f6 * p.powi(3) + f4 * (3.0 * r * p * p + 4.0 * (23.0 + 6.0 * q + 23.0 * q * q))
                - f2 * p * (3.0 * r * r + 52.0 * r + 80.0)
                + r.powi(3)
        }
        8 => {
            -24.0 * f6 * (1.0 - q) * p * p + 48.0 * f4 * (1.0 - q * q) * (r + 12.0)
                - 24.0 * f2 * (1.0 - q) * (r * r + 8.0 * r + 8.0)
        }
        9 => {
            f8 * p.powi(4)
                - 4.0 * f6 * p * (r * p * p + 86.0 - 36.0 * q + 86.0 * q * q)
                + f4
                    * (6.0 * r * r * p * p
                        + 32.0 * r * (15.0 + 4.0 * q + 15.0 * q * q)
                        + 16.0 * (201.0 + 10.0 * q + 201.0 * q * q))
                - 4.0 * f2 * p * (r.powi(3) + 34.0 * r * r + 160.0 * r + 112.0)
                + r.powi(4)
        }
        10 => {
            40.0 * f8 * (1.0 - q) * p.powi(3)
                - f6 * (1.0 - q) * p * p * (120.0 * r + 3200.0 + 640.0 * ((1.0 - q) / p).powi(2))
                + f4 * (1.0 - q * q) * (120.0 * r * r + 3840.0 * r + 16704.0)
                - f2 * (1.0 - q) * (40.0 * r.powi(3) + 640.0 * r * r + 1984.0 * r + 1024.0)
        }
        11 => {
            -f8 * f2 * p.powi(5)
                + 5.0 * f8 * p * p * (r * p * p + 184.0 - 144.0 * q + 184.0 * q * q)
                - f6
                    * p
                    * (10.0 * r * r * p * p
                        + 40.0 * r * (53.0 - 22.0 * q + 53.0 * q * q)
                        + 36912.0 - 29216.0 * q + 36912.0 * q * q)
                + f4
                    * (10.0 * r.powi(3) * p * p
                        + r * r * (1480.0 + 400.0 * q + 1480.0 * q * q)
                        + r * (26896.0 + 1440.0 * q + 26896.0 * q * q)
                        + 82624.0 + 896.0 * q + 82624.0 * q * q)
                - f2 * p * (5.0 * r.powi(4) + 280.0 * r.powi(3) + 2656.0 * r * r + 5824.0 * r + 2304.0)
                + r.powi(5)
        }
        _ => panic!("table covers derivatives 3..=11"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_h_zero_is_cosine() {
        let samples = integrate_angular(0.0, 4.0, (1.0, 0.0), (0.0, 1.5), 1024);
        let last = samples.last().unwrap();
        assert!((last.y - (3.0f64).cos()).abs() < 1e-10);
    }

    #[test]
    fn radial_h_zero_is_sinh() {
        let samples = integrate_radial(0.0, 9.0, (0.0, 3.0), (0.0, 1.0), 1024);
        let last = samples.last().unwrap();
        assert!((last.y - (3.0f64).sinh()).abs() < 1e-8);
    }

    #[test]
    fn wronskian_constant() {
        // two independent solutions of the same equation keep a constant Wronskian
        let a = integrate_angular(0.9, 3.7, (1.0, 0.0), (0.0, 3.0), 2048);
        let b = integrate_angular(0.9, 3.7, (0.0, 1.0), (0.0, 3.0), 2048);
        let w0 = a[0].y * b[0].dy - b[0].y * a[0].dy;
        for k in [512, 1024, 2048] {
            let w = a[k].y * b[k].dy - b[k].y * a[k].dy;
            assert!((w - w0).abs() < 1e-8, "k={k}: {w} vs {w0}");
        }
    }

    #[test]
    fn first_zeros_of_low_orders() {
        assert!((bessel_zero(0, 1) - 2.404825557695773).abs() < 1e-9);
        assert!((bessel_zero(1, 1) - 3.831705970207512).abs() < 1e-9);
        assert!((bessel_zero(0, 2) - 5.520078110286311).abs() < 1e-9);
    }

    #[test]
    fn zero_interlacing() {
        for n in 0..6u32 {
            for s in 1..5u32 {
                let a = bessel_zero(n, s);
                let b = bessel_zero(n + 1, s);
                let c = bessel_zero(n, s + 1);
                assert!(a < b && b < c, "interlacing failed at n={n}, s={s}");
            }
        }
    }

    #[test]
    fn halving_estimate_bounds_error() {
        let est = angular_error_estimate(0.0, 4.0, (1.0, 0.0), (0.0, 1.5), 1024);
        let got = integrate_angular(0.0, 4.0, (1.0, 0.0), (0.0, 1.5), 2048)
            .last()
            .unwrap()
            .y;
        let truth = (3.0f64).cos();
        assert!((got - truth).abs() <= est.max(1e-12) * 10.0);
    }
}
