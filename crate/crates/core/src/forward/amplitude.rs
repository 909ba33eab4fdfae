//! Exact 2D scattering amplitudes of a circular obstacle, and the amplitude
//! source abstraction shared by the localization methods.
//!
//! The far-field convention is v ~ A(alpha', alpha) e^{ikr} / sqrt(r). For a
//! circle of radius a centered at x0 the partial-wave series gives
//!
//!   A = -sqrt(2/(pi k)) e^{-i pi/4} e^{ik (alpha - alpha') . x0}
//!       sum_l rho_l e^{il(theta - beta)},
//!
//! with rho_l = J_l(ka)/H1_l(ka) for a sound-soft boundary and
//! rho_l = (k J'_l + h J_l)/(k H1'_l + h H1_l) at ka under an impedance
//! condition du/dn + h u = 0.

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::specfun::{bessel_j_array, bessel_y_array, cyl_deriv};
use crate::C64;

/// Boundary condition of the obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin { h: f64 },
}

/// Anything that can produce far-field samples A(alpha', alpha).
pub trait AmplitudeSource: Sync {
    fn k(&self) -> f64;
    fn amplitude(&self, alpha_out: [f64; 2], alpha_in: [f64; 2]) -> C64;
}

/// Closure-backed amplitude source.
pub struct CallbackAmplitude<F: Fn([f64; 2], [f64; 2]) -> C64 + Sync> {
    pub k: f64,
    pub f: F,
}

impl<F: Fn([f64; 2], [f64; 2]) -> C64 + Sync> AmplitudeSource for CallbackAmplitude<F> {
    fn k(&self) -> f64 {
        self.k
    }
    fn amplitude(&self, alpha_out: [f64; 2], alpha_in: [f64; 2]) -> C64 {
        (self.f)(alpha_out, alpha_in)
    }
}

/// Circle scatterer with precomputed partial-wave ratios.
#[derive(Debug, Clone)]
pub struct CircleScatterer {
    pub a: f64,
    pub center: [f64; 2],
    pub k: f64,
    pub bc: BoundaryCondition,
    rho: Vec<C64>,
}

impl CircleScatterer {
    pub fn new(a: f64, center: [f64; 2], k: f64, bc: BoundaryCondition) -> Result<Self> {
        if a <= 0.0 || k <= 0.0 {
            return Err(Error::invalid("circle radius and wavenumber must be positive"));
        }
        let l_max = (k * a).ceil() as usize + 40;
        let x = k * a;
        let j = bessel_j_array(l_max + 1, x)?;
        let y = bessel_y_array(l_max + 1, x)?;
        let rho = (0..=l_max)
            .map(|l| {
                let h = C64::new(j[l], y[l]);
                match bc {
                    BoundaryCondition::Dirichlet => j[l] / h,
                    BoundaryCondition::Robin { h: imp } => {
                        let dj = cyl_deriv(&j, l, x);
                        let dh = C64::new(dj, cyl_deriv(&y, l, x));
                        (k * dj + imp * j[l]) / (k * dh + imp * h)
                    }
                }
            })
            .collect();
        Ok(CircleScatterer { a, center, k, bc, rho })
    }
}

impl AmplitudeSource for CircleScatterer {
    fn k(&self) -> f64 {
        self.k
    }

    fn amplitude(&self, alpha_out: [f64; 2], alpha_in: [f64; 2]) -> C64 {
        let theta = alpha_out[1].atan2(alpha_out[0]);
        let beta = alpha_in[1].atan2(alpha_in[0]);
        let mut series = self.rho[0];
        let mut partial = series.norm();
        for (l, rho) in self.rho.iter().enumerate().skip(1) {
            let term = 2.0 * rho * (l as f64 * (theta - beta)).cos();
            series += term;
            partial = partial.max(series.norm());
            if rho.norm() < 1e-14 * partial.max(1e-300) {
                break;
            }
        }
        let shift = self.k
            * ((alpha_in[0] - alpha_out[0]) * self.center[0]
                + (alpha_in[1] - alpha_out[1]) * self.center[1]);
        let pref = -(2.0 / (std::f64::consts::PI * self.k)).sqrt()
            * C64::new(0.0, -std::f64::consts::FRAC_PI_4).exp();
        pref * C64::new(0.0, shift).exp() * series
    }
}

/// One-shot evaluation of the exact circle amplitude.
pub fn circle_amplitude(
    a: f64,
    center: [f64; 2],
    k: f64,
    bc: BoundaryCondition,
    alpha_out: [f64; 2],
    alpha_in: [f64; 2],
) -> Result<C64> {
    Ok(CircleScatterer::new(a, center, k, bc)?.amplitude(alpha_out, alpha_in))
}

/// A far-field matrix used as an amplitude source through nearest-direction
/// lookup on its uniform grids (sufficient for the sampling-type methods,
/// which only query grid directions).
pub struct TabulatedAmplitude {
    pub k: f64,
    pub n: usize,
    pub entries: CMat,
}

impl AmplitudeSource for TabulatedAmplitude {
    fn k(&self) -> f64 {
        self.k
    }

    fn amplitude(&self, alpha_out: [f64; 2], alpha_in: [f64; 2]) -> C64 {
        let idx = |v: [f64; 2]| -> usize {
            let t = v[1].atan2(v[0]).rem_euclid(2.0 * std::f64::consts::PI);
            let i = (t / (2.0 * std::f64::consts::PI) * self.n as f64).round() as usize;
            i % self.n
        };
        self.entries.get(idx(alpha_out), idx(alpha_in))
    }
}

/// Unit vector at polar angle t.
pub fn unit(t: f64) -> [f64; 2] {
    [t.cos(), t.sin()]
}
