//! Independent oracles for the integration suites. Everything here computes
//! reference values by a different route than the library: quadrature for
//! orthonormality, a variable-phase ODE for phase shifts, and the
//! single-interface closed form for the penetrable disc.

#![allow(dead_code)]

use scatter_core::specfun::{bessel_j_array, bessel_y_array, cyl_deriv, i_pow};
use scatter_core::C64;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Riccati-Bessel pair (x j_l(x), x y_l(x)) for l = 0..=l_max by
/// independent recurrences (downward for the regular one).
pub fn riccati_jy(l_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(x > 0.0);
    let start = l_max + 20 + (x as usize);
    let mut up = vec![0.0f64; start + 2];
    up[start + 1] = 0.0;
    up[start] = 1e-290;
    for l in (1..=start).rev() {
        up[l - 1] = (2 * l + 1) as f64 / x * up[l] - up[l + 1];
        if up[l - 1].abs() > 1e260 {
            for v in up.iter_mut().skip(l - 1) {
                *v *= 1e-260;
            }
        }
    }
    let sj0 = x.sin();
    let sj1 = x.sin() / x - x.cos();
    // Normalize by the better-conditioned of the two closed forms.
    let scale = if sj0.abs() >= sj1.abs() && up[0].abs() > 0.0 {
        sj0 / up[0]
    } else {
        sj1 / up[1]
    };
    let j: Vec<f64> = up[..=l_max].iter().map(|v| v * scale).collect();

    let mut y = vec![0.0f64; l_max + 1];
    y[0] = -x.cos();
    if l_max >= 1 {
        y[1] = -x.cos() / x - x.sin();
        for l in 1..l_max {
            y[l + 1] = (2 * l + 1) as f64 / x * y[l] - y[l - 1];
        }
    }
    (j, y)
}

/// Absolute fixed-energy phase shift of a piecewise-constant potential by
/// adaptive integration of the variable-phase equation
///   delta'(r) = -(q(r)/k) [cos(delta) xj_l(kr) - sin(delta) xy_l(kr)]^2.
///
/// `shells` are (r_lo, r_hi, q) with q = 0 outside.
///
/// Below the centrifugal turn-on the exact phase is negligible while the
/// irregular solution amplifies any numerical wobble of delta through the
/// xy_l^2 term, so the integration starts at the radius where the
/// accumulated regular-solution contribution first exceeds 1e-16.
pub fn variable_phase_shift(shells: &[(f64, f64, f64)], k: f64, l: usize) -> f64 {
    let rhs = |r: f64, delta: f64, q: f64| -> f64 {
        if q == 0.0 || r == 0.0 {
            return 0.0;
        }
        let x = k * r;
        let (j, y) = riccati_jy(l, x);
        let s = delta.cos() * j[l] - delta.sin() * y[l];
        -(q / k) * s * s
    };

    let r_max = shells.iter().map(|s| s.1).fold(0.0f64, f64::max);
    let q_of = |r: f64| -> f64 {
        shells
            .iter()
            .find(|&&(lo, hi, _)| r >= lo && r < hi)
            .map(|s| s.2)
            .unwrap_or(0.0)
    };
    let mut r_start = 0.0f64;
    if l >= 2 {
        let n = 4000;
        let mut acc = 0.0f64;
        for i in 0..n {
            let r = r_max * (i as f64 + 0.5) / n as f64;
            let q = q_of(r);
            if q != 0.0 {
                let (j, _) = riccati_jy(l, k * r);
                acc += (q / k).abs() * j[l] * j[l] * (r_max / n as f64);
            }
            if acc > 1e-16 {
                break;
            }
            r_start = r_max * (i as f64 + 1.0) / n as f64;
        }
    }

    let mut delta = 0.0f64;
    for &(lo, hi, q) in shells {
        let lo = lo.max(r_start);
        if q == 0.0 || hi <= lo {
            continue;
        }
        delta = rk45(|r, d| rhs(r, d, q), lo.max(1e-12), hi, delta, 5e-13);
    }
    delta
}

/// Cash-Karp embedded Runge-Kutta with adaptive steps. The step is capped
/// at a fraction of the interval: the phase equation is numerically silent
/// at small radii for large l, and uncapped growth would leap across the
/// turn-on region with a deceptively small embedded error estimate.
fn rk45(f: impl Fn(f64, f64) -> f64, mut t: f64, t_end: f64, mut yv: f64, tol: f64) -> f64 {
    let h_cap = (t_end - t) / 1000.0;
    let mut h = h_cap;
    while t < t_end {
        h = h.min(h_cap);
        if t + h > t_end {
            h = t_end - t;
        }
        let k1 = f(t, yv);
        let k2 = f(t + 0.2 * h, yv + h * 0.2 * k1);
        let k3 = f(t + 0.3 * h, yv + h * (0.075 * k1 + 0.225 * k2));
        let k4 = f(t + 0.6 * h, yv + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
        let k5 = f(
            t + h,
            yv + h * (-11.0 / 54.0 * k1 + 2.5 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4),
        );
        let k6 = f(
            t + 0.875 * h,
            yv + h
                * (1631.0 / 55296.0 * k1
                    + 175.0 / 512.0 * k2
                    + 575.0 / 13824.0 * k3
                    + 44275.0 / 110592.0 * k4
                    + 253.0 / 4096.0 * k5),
        );
        let y5 = yv
            + h * (37.0 / 378.0 * k1
                + 250.0 / 621.0 * k3
                + 125.0 / 594.0 * k4
                + 512.0 / 1771.0 * k6);
        let y4 = yv
            + h * (2825.0 / 27648.0 * k1
                + 18575.0 / 48384.0 * k3
                + 13525.0 / 55296.0 * k4
                + 277.0 / 14336.0 * k5
                + 0.25 * k6);
        let err = (y5 - y4).abs();
        let scale = tol * (1.0 + yv.abs());
        if err <= scale || h.abs() < 1e-13 {
            t += h;
            yv = y5;
            h *= (0.9 * (scale / err.max(1e-300)).powf(0.2)).clamp(0.1, 4.0);
        } else {
            h *= (0.9 * (scale / err).powf(0.25)).clamp(0.1, 0.9);
        }
    }
    yv
}

/// Reduces an angle to the (-pi/2, pi/2] branch modulo pi.
pub fn fold_mod_pi(d: f64) -> f64 {
    let mut r = d % std::f64::consts::PI;
    if r > std::f64::consts::FRAC_PI_2 {
        r -= std::f64::consts::PI;
    }
    if r <= -std::f64::consts::FRAC_PI_2 {
        r += std::f64::consts::PI;
    }
    r
}

/// Circular distance modulo pi.
pub fn dist_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

/// Scattered-mode coefficients of a uniform penetrable disc (radius a,
/// refractive index n) from the single-interface closed form:
/// c_l = -i^l (kin J_l'(kin a) J_l(k a) - k J_l(kin a) J_l'(k a)) /
///            (kin J_l'(kin a) H_l(k a) - k J_l(kin a) H_l'(k a)).
pub fn disc_mode_coefficients(a: f64, n: f64, k0: f64, l_max: usize) -> Vec<C64> {
    let kin = k0 * n.sqrt();
    let ji = bessel_j_array(l_max + 1, kin * a).unwrap();
    let jo = bessel_j_array(l_max + 1, k0 * a).unwrap();
    let yo = bessel_y_array(l_max + 1, k0 * a).unwrap();
    (0..=l_max)
        .map(|l| {
            let dji = cyl_deriv(&ji, l, kin * a);
            let djo = cyl_deriv(&jo, l, k0 * a);
            let dyo = cyl_deriv(&yo, l, k0 * a);
            let h = C64::new(jo[l], yo[l]);
            let dh = C64::new(djo, dyo);
            let num = kin * dji * jo[l] - k0 * ji[l] * djo;
            let den = kin * dji * h - k0 * ji[l] * dh;
            -i_pow(l) * num / den
        })
        .collect()
}

/// Total field of the uniform disc on the circle r = r_meas from the
/// closed-form coefficients.
pub fn disc_total_field(a: f64, n: f64, k0: f64, r_meas: f64, angles: &[f64]) -> Vec<C64> {
    let l_max = (k0 * r_meas).ceil() as usize + 24;
    let c = disc_mode_coefficients(a, n, k0, l_max);
    let j = bessel_j_array(l_max + 1, k0 * r_meas).unwrap();
    let y = bessel_y_array(l_max + 1, k0 * r_meas).unwrap();
    angles
        .iter()
        .map(|&th| {
            let mut u = i_pow(0) * j[0] + c[0] * C64::new(j[0], y[0]);
            for l in 1..=l_max {
                let h = C64::new(j[l], y[l]);
                u += 2.0 * (i_pow(l) * j[l] + c[l] * h) * (l as f64 * th).cos();
            }
            u
        })
        .collect()
}

/// Scattered field of the sound-soft disc of radius a at an exterior point,
/// partial-wave series with the incident wave along +x.
pub fn soft_disc_scattered_field(a: f64, k: f64, point: [f64; 2]) -> C64 {
    let r = (point[0] * point[0] + point[1] * point[1]).sqrt();
    let th = point[1].atan2(point[0]);
    let l_max = (k * r).ceil() as usize + 30;
    let ja = bessel_j_array(l_max + 1, k * a).unwrap();
    let ya = bessel_y_array(l_max + 1, k * a).unwrap();
    let jr = bessel_j_array(l_max + 1, k * r).unwrap();
    let yr = bessel_y_array(l_max + 1, k * r).unwrap();
    let mut v = C64::new(0.0, 0.0);
    for l in 0..=l_max {
        let cl = -i_pow(l) * ja[l] / C64::new(ja[l], ya[l]);
        let h = C64::new(jr[l], yr[l]);
        let w = if l == 0 { 1.0 } else { 2.0 * (l as f64 * th).cos() };
        v += cl * h * w;
    }
    v
}
