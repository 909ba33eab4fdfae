//! Fixed-energy phase shifts of spherically symmetric piecewise-constant
//! potentials.
//!
//! Inside a shell of constant potential q_m the radial solution is a
//! combination of spherical Bessel functions at the shell wavenumber
//! kappa_m = sqrt(k^2 - q_m); crossing a shell boundary matches value and
//! derivative. The computation stays in complex arithmetic throughout so
//! shells with q_m > k^2 need no separate branch. At the support radius the
//! pair (psi, psi') is combined with the free solutions into
//!
//!   tan delta_l = (k j'_l(kR) psi - psi' j_l(kR)) / (k y'_l(kR) psi - psi' y_l(kR)),
//!
//! evaluated without dividing by psi, so boundary nodes are harmless. The
//! reported branch is delta_l in (-pi/2, pi/2], the atan branch of the ratio;
//! a free potential yields exactly zero for every l.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::layered::RadialProfile;
use crate::specfun::{sph_deriv, sph_j_array, sph_y_array};
use crate::C64;

/// Phase shifts delta_l, l = 0..shifts.len()-1, at a fixed wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftSet {
    pub k: f64,
    pub shifts: Vec<f64>,
}

impl PhaseShiftSet {
    /// Largest-order magnitude, a tail-decay diagnostic.
    pub fn tail_magnitude(&self) -> f64 {
        self.shifts.last().map_or(0.0, |d| d.abs())
    }
}

/// Phase shifts of the potential profile for l = 0..=l_max.
///
/// The potential is `profile` inside its breakpoints and zero beyond; the
/// matching happens at the profile's outer radius.
pub fn phase_shifts(profile: &RadialProfile, k: f64, l_max: usize) -> Result<PhaseShiftSet> {
    if k <= 0.0 {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    match phase_shifts_inner(profile, k, l_max, 0.0) {
        Ok(s) => Ok(s),
        // One retry with perturbed radii covers degenerate interface hits.
        Err(Error::Overflow(_)) => phase_shifts_inner(profile, k, l_max, 1e-12 * profile.outer_radius),
        Err(e) => Err(e),
    }
}

fn phase_shifts_inner(
    profile: &RadialProfile,
    k: f64,
    l_max: usize,
    radius_shift: f64,
) -> Result<PhaseShiftSet> {
    let r_match = profile.outer_radius;
    // Shells with positive width, padded with the zero shell out to R.
    let mut shells: Vec<(f64, f64, f64)> = profile
        .effective_layers()
        .into_iter()
        .map(|(lo, hi, q)| (lo, (hi + radius_shift).min(r_match), q))
        .collect();
    let last_hi = shells.last().map_or(0.0, |s| s.1);
    if r_match - last_hi > 1e-12 * r_match.max(1.0) {
        shells.push((last_hi, r_match, 0.0));
    }
    if shells.is_empty() {
        return Ok(PhaseShiftSet { k, shifts: vec![0.0; l_max + 1] });
    }

    let kappa: Vec<C64> = shells
        .iter()
        .map(|&(_, _, q)| C64::new(k * k - q, 0.0).sqrt())
        .collect();

    // Radial tables per (shell, interface) argument.
    struct Tab {
        j: Vec<C64>,
        y: Vec<C64>,
        z: C64,
    }
    let tab = |z: C64| -> Result<Tab> {
        Ok(Tab { j: sph_j_array(l_max + 1, z)?, y: sph_y_array(l_max + 1, z)?, z })
    };
    let mut own = Vec::with_capacity(shells.len());
    let mut next = Vec::with_capacity(shells.len());
    for i in 0..shells.len() {
        let r_i = shells[i].1;
        own.push(tab(kappa[i] * r_i)?);
        if i + 1 < shells.len() {
            next.push(tab(kappa[i + 1] * r_i)?);
        }
    }
    let free = tab(C64::new(k * r_match, 0.0))?;

    let mut shifts = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        // Regular solution j_l in the innermost shell, evaluated at its
        // outer boundary.
        let mut psi = own[0].j[l];
        let mut dpsi = kappa[0] * sph_deriv(&own[0].j, l, own[0].z);
        for i in 0..shells.len() - 1 {
            let t = &next[i];
            let kap = kappa[i + 1];
            // Spherical Wronskian j y' - j' y = 1/z^2.
            let wr = 1.0 / (t.z * t.z);
            let dj = sph_deriv(&t.j, l, t.z);
            let dy = sph_deriv(&t.y, l, t.z);
            let a = (psi * kap * dy - dpsi * t.y[l]) / (kap * wr);
            let b = (dpsi * t.j[l] - psi * kap * dj) / (kap * wr);
            let far = &own[i + 1];
            psi = a * far.j[l] + b * far.y[l];
            dpsi = kap * (a * sph_deriv(&far.j, l, far.z) + b * sph_deriv(&far.y, l, far.z));
            // The pair is projective; keep it scaled.
            let scale = psi.norm().max(dpsi.norm());
            if scale > 0.0 {
                psi /= scale;
                dpsi /= scale;
            }
            if !psi.is_finite() || !dpsi.is_finite() {
                return Err(Error::Overflow(format!(
                    "nonfinite matching at shell {i}, mode {l}"
                )));
            }
        }
        let djf = sph_deriv(&free.j, l, free.z);
        let dyf = sph_deriv(&free.y, l, free.z);
        let num = k * djf * psi - dpsi * free.j[l];
        let den = k * dyf * psi - dpsi * free.y[l];
        // num/den is real up to rounding; the sign-safe real pair is
        // (Re(num conj(den)), |den|^2).
        let y = (num * den.conj()).re;
        let x = den.norm_sqr();
        if !y.is_finite() || !x.is_finite() {
            return Err(Error::Overflow(format!("nonfinite shift at mode {l}")));
        }
        let mut delta = y.atan2(x);
        if delta <= -std::f64::consts::FRAC_PI_2 {
            delta += std::f64::consts::PI;
        }
        shifts.push(delta);
    }
    Ok(PhaseShiftSet { k, shifts })
}

/// Multiplicative noise delta_h = delta (1 + (0.5 - z) h), z uniform on
/// [0, 1], one draw per shift.
pub fn noisy_shifts(set: &PhaseShiftSet, h: f64, seed: u64) -> PhaseShiftSet {
    if h == 0.0 {
        return set.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts = set
        .shifts
        .iter()
        .map(|d| {
            let z: f64 = rng.gen::<f64>();
            d * (1.0 + (0.5 - z) * h)
        })
        .collect();
    PhaseShiftSet { k: set.k, shifts }
}
