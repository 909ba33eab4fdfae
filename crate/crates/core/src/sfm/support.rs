//! Support-function recovery from far-field data.
//!
//! For a direction l, incidence directions are sampled on the cone
//! alpha . l > 1/sqrt(2) with the observation direction given by the
//! reflection alpha' = alpha - 2 (alpha . l) l. Under the specular
//! approximation the normalized amplitude is -e^{ik|alpha - alpha'| d(l)},
//! so the phase-matching functional
//!
//!   Psi(t) = sum_alpha |A/|A| + e^{ik |alpha - alpha'| t}|^2
//!
//! (nearly) vanishes at t = d(l). A grid scan locates the global minimum
//! and a golden-section pass refines it. For unknown boundary conditions a
//! linear regression of the unwrapped phase against t = |alpha - alpha'|
//! recovers d(l) from the slope.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::amplitude::AmplitudeSource;

/// Sampled support function over a direction grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSamples {
    /// Direction angles t_i (directions l_i = (cos t_i, sin t_i)).
    pub angles: Vec<f64>,
    /// Support values d(l_i).
    pub values: Vec<f64>,
}

impl SupportSamples {
    pub fn direction(&self, i: usize) -> [f64; 2] {
        [self.angles[i].cos(), self.angles[i].sin()]
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportParams {
    /// Incidence directions sampled on the cone around l.
    pub n_alpha: usize,
    /// Scan range for the support value (a priori obstacle radius).
    pub t_range: (f64, f64),
    /// Golden-section refinement tolerance.
    pub refine_tol: f64,
}

impl Default for SupportParams {
    fn default() -> Self {
        SupportParams { n_alpha: 32, t_range: (-20.0, 20.0), refine_tol: 1e-6 }
    }
}

fn rotate(l: [f64; 2], phi: f64) -> [f64; 2] {
    [
        l[0] * phi.cos() - l[1] * phi.sin(),
        l[0] * phi.sin() + l[1] * phi.cos(),
    ]
}

fn reflect(alpha: [f64; 2], l: [f64; 2]) -> [f64; 2] {
    let dot = alpha[0] * l[0] + alpha[1] * l[1];
    [alpha[0] - 2.0 * dot * l[0], alpha[1] - 2.0 * dot * l[1]]
}

/// Recovers d(l) as the minimizer of the phase-matching functional.
pub fn support_from_amplitude(
    src: &dyn AmplitudeSource,
    l: [f64; 2],
    params: &SupportParams,
) -> Result<f64> {
    let k = src.k();
    // Cone samples strictly inside alpha . l > 1/sqrt(2).
    let mut samples = Vec::with_capacity(params.n_alpha);
    for i in 0..params.n_alpha {
        let phi = -std::f64::consts::FRAC_PI_4
            + (i as f64 + 0.5) * std::f64::consts::FRAC_PI_2 / params.n_alpha as f64;
        let alpha = rotate(l, phi);
        let alpha_out = reflect(alpha, l);
        let sep = ((alpha[0] - alpha_out[0]).powi(2) + (alpha[1] - alpha_out[1]).powi(2)).sqrt();
        let a = src.amplitude(alpha_out, alpha);
        if a.norm() > 0.0 {
            samples.push((a / a.norm(), sep));
        }
    }
    if samples.is_empty() {
        return Err(Error::invalid("amplitude vanished on the whole sampling cone"));
    }

    let psi = |t: f64| -> f64 {
        samples
            .iter()
            .map(|(u, sep)| (u + crate::C64::new(0.0, k * sep * t).exp()).norm_sqr())
            .sum()
    };

    // Global grid scan at the phase-resolving step, then golden section.
    let (t0, t1) = params.t_range;
    let step = std::f64::consts::PI / (16.0 * k);
    let n = ((t1 - t0) / step).ceil() as usize;
    let mut best_t = t0;
    let mut best_v = f64::INFINITY;
    for i in 0..=n {
        let t = t0 + (t1 - t0) * i as f64 / n as f64;
        let v = psi(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    let (mut a, mut b) = (
        (best_t - (t1 - t0) / n as f64).max(t0),
        (best_t + (t1 - t0) / n as f64).min(t1),
    );
    // Golden-section refinement.
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = psi(c);
    let mut fd = psi(d);
    while (b - a).abs() > params.refine_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = psi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = psi(d);
        }
    }
    Ok(0.5 * (a + b))
}

/// Support recovery for every direction of a uniform grid; directions are
/// independent and evaluated in parallel with deterministic ordering.
pub fn support_samples(
    src: &dyn AmplitudeSource,
    n_dirs: usize,
    params: &SupportParams,
) -> Result<SupportSamples> {
    let angles: Vec<f64> = (0..n_dirs)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n_dirs as f64)
        .collect();
    let values = angles
        .par_iter()
        .map(|&t| support_from_amplitude(src, [t.cos(), t.sin()], params))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SupportSamples { angles, values })
}

/// Result of the unknown-boundary (regression) variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinSupport {
    pub d: f64,
    /// Impedance estimate -k tan(C2 / 2) from the regression intercept;
    /// numerically unreliable and flagged as such.
    pub h_est: f64,
    pub h_reliable: bool,
}

/// Recovers d(l) by fitting the unwrapped amplitude phase against
/// t = |alpha - alpha'| on (sqrt(2), 2]: psi(t) ~ C1 t + C2 with
/// d = C1 / k.
///
/// Samples are uniform in the incidence angle over a slightly trimmed cone
/// (angles up to 0.7 rad off the backscattering axis), which weights the
/// fit toward the directions where the specular phase model is reliable.
pub fn support_robin(src: &dyn AmplitudeSource, l: [f64; 2], n_t: usize) -> Result<RobinSupport> {
    if n_t < 3 {
        return Err(Error::invalid("regression needs at least 3 samples"));
    }
    let k = src.k();
    let phi_max = 0.7f64;
    let mut ts = Vec::with_capacity(n_t);
    let mut phases = Vec::with_capacity(n_t);
    for i in 0..n_t {
        // Descending angle = increasing t, ending near backscattering.
        let phi = phi_max * (1.0 - (i as f64 + 0.5) / n_t as f64);
        let alpha = rotate(l, phi);
        let alpha_out = reflect(alpha, l);
        let t = 2.0 * (alpha[0] * l[0] + alpha[1] * l[1]);
        let a = src.amplitude(alpha_out, alpha);
        if a.norm() == 0.0 {
            continue;
        }
        ts.push(t);
        phases.push(a.im.atan2(a.re));
    }
    if ts.len() < 3 {
        return Err(Error::invalid("not enough usable samples for the regression"));
    }
    // Unwrap along increasing t.
    for i in 1..phases.len() {
        let mut p = phases[i];
        while p - phases[i - 1] > std::f64::consts::PI {
            p -= 2.0 * std::f64::consts::PI;
        }
        while p - phases[i - 1] < -std::f64::consts::PI {
            p += 2.0 * std::f64::consts::PI;
        }
        phases[i] = p;
    }
    // Least-squares line.
    let n = ts.len() as f64;
    let sx: f64 = ts.iter().sum();
    let sy: f64 = phases.iter().sum();
    let sxx: f64 = ts.iter().map(|t| t * t).sum();
    let sxy: f64 = ts.iter().zip(&phases).map(|(t, p)| t * p).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-14 {
        return Err(Error::Singular("degenerate regression abscissae".into()));
    }
    let c1 = (n * sxy - sx * sy) / denom;
    let c2 = (sy * sxx - sx * sxy) / denom;
    Ok(RobinSupport { d: c1 / k, h_est: -k * (0.5 * c2).tan(), h_reliable: false })
}
