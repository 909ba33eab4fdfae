//! Transmission problem for a radially layered penetrable disc in 2D.
//!
//! The scatterer is piecewise constant in the refractive index. Each angular
//! mode is solved by matching value and radial derivative of the field across
//! every interface; the incident plane wave enters through its cylindrical
//! expansion. The measured quantity is the total field on a circle of radius
//! R enclosing the scatterer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_j_array, bessel_y_array, cyl_deriv, i_pow};
use crate::C64;

/// Piecewise-constant radial function. `values[m]` holds on
/// [breakpoints[m-1], breakpoints[m]) with breakpoints[-1] = 0; beyond the
/// last breakpoint the background value applies (1 for refractive indices,
/// 0 for potentials).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub outer_radius: f64,
}

impl RadialProfile {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, outer_radius: f64) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::invalid(format!(
                "profile needs matching breakpoints/values, got {}/{}",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("breakpoints must be nondecreasing"));
        }
        if let Some(&first) = breakpoints.first() {
            if first < 0.0 {
                return Err(Error::invalid("breakpoints must be nonnegative"));
            }
        }
        if let Some(&last) = breakpoints.last() {
            if last > outer_radius + 1e-12 {
                return Err(Error::invalid(format!(
                    "last breakpoint {last} exceeds outer radius {outer_radius}"
                )));
            }
        }
        Ok(RadialProfile { breakpoints, values, outer_radius })
    }

    /// Single uniform layer of the given value on [0, radius).
    pub fn single(radius: f64, value: f64, outer_radius: f64) -> Self {
        RadialProfile { breakpoints: vec![radius], values: vec![value], outer_radius }
    }

    /// Builds a profile from an optimizer point laid out as
    /// (r_1..r_m, c_1..c_m), sorting radii jointly with their values.
    pub fn from_point(point: &[f64], outer_radius: f64) -> Self {
        let m = point.len() / 2;
        let mut pairs: Vec<(f64, f64)> = (0..m).map(|i| (point[i], point[m + i])).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        RadialProfile {
            breakpoints: pairs.iter().map(|p| p.0.clamp(0.0, outer_radius)).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
            outer_radius,
        }
    }

    /// Flattens to the (r.., c..) layout.
    pub fn to_point(&self) -> Vec<f64> {
        let mut p = self.breakpoints.clone();
        p.extend_from_slice(&self.values);
        p
    }

    /// Value at radius r with the given background.
    pub fn value_at(&self, r: f64, background: f64) -> f64 {
        let mut lo = 0.0;
        for (bp, v) in self.breakpoints.iter().zip(&self.values) {
            if r >= lo && r < *bp {
                return *v;
            }
            lo = *bp;
        }
        background
    }

    /// Layers with positive width as (inner, outer, value) triples; zero-width
    /// entries are dropped.
    pub fn effective_layers(&self) -> Vec<(f64, f64, f64)> {
        let min_width = 1e-12 * self.outer_radius.max(1.0);
        let mut out = Vec::new();
        let mut lo = 0.0f64;
        for (bp, v) in self.breakpoints.iter().zip(&self.values) {
            if *bp - lo > min_width {
                out.push((lo, *bp, *v));
            }
            lo = lo.max(*bp);
        }
        out
    }

    /// Canonical reporting form: drops zero-width layers, merges adjacent
    /// layers of (nearly) equal value, drops trailing background.
    pub fn simplified(&self, value_tol: f64, background: f64) -> RadialProfile {
        let layers = self.effective_layers();
        let mut merged: Vec<(f64, f64, f64)> = Vec::new();
        for (lo, hi, v) in layers {
            match merged.last_mut() {
                Some((_, phi, pv)) if (*pv - v).abs() <= value_tol && (*phi - lo).abs() < 1e-9 => {
                    *phi = hi;
                }
                _ => merged.push((lo, hi, v)),
            }
        }
        while matches!(merged.last(), Some(&(_, _, v)) if (v - background).abs() <= value_tol) {
            merged.pop();
        }
        RadialProfile {
            breakpoints: merged.iter().map(|l| l.1).collect(),
            values: merged.iter().map(|l| l.2).collect(),
            outer_radius: self.outer_radius,
        }
    }
}

/// Total field sampled on the measurement circle |x| = radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredFieldSamples {
    pub k0: f64,
    pub radius: f64,
    pub angles: Vec<f64>,
    pub values: Vec<C64>,
}

struct ModeTables {
    j: Vec<f64>,
    y: Vec<f64>,
    x: f64,
}

impl ModeTables {
    fn build(l_max: usize, x: f64) -> Result<Self> {
        Ok(ModeTables {
            j: bessel_j_array(l_max + 1, x)?,
            y: bessel_y_array(l_max + 1, x)?,
            x,
        })
    }

    fn j(&self, l: usize) -> f64 {
        self.j[l]
    }

    fn y(&self, l: usize) -> f64 {
        self.y[l]
    }

    fn dj(&self, l: usize) -> f64 {
        cyl_deriv(&self.j, l, self.x)
    }

    fn dy(&self, l: usize) -> f64 {
        cyl_deriv(&self.y, l, self.x)
    }
}

/// Per-mode scattered-field coefficients c_l of the exterior expansion
/// i^l J_l(k0 r) + c_l H1_l(k0 r), l = 0..=l_max.
pub fn scattering_coefficients(
    profile: &RadialProfile,
    k0: f64,
    l_max: usize,
) -> Result<Vec<C64>> {
    if k0 <= 0.0 {
        return Err(Error::invalid("k0 must be positive"));
    }
    if profile.values.iter().any(|&n| n <= 0.0) {
        return Err(Error::invalid("refractive indices must be positive"));
    }
    let mut layers = profile.effective_layers();
    // Trailing background layers are free space already.
    while matches!(layers.last(), Some(&(_, _, n)) if (n - 1.0).abs() <= 1e-14) {
        layers.pop();
    }
    if layers.is_empty() {
        return Ok(vec![C64::new(0.0, 0.0); l_max + 1]);
    }

    // Wavenumbers per layer plus free space beyond the last interface.
    let kn: Vec<f64> = layers.iter().map(|&(_, _, n)| k0 * n.sqrt()).collect();
    let r_out = layers.last().unwrap().1;

    // Radial tables at each (wavenumber, interface radius) argument used.
    // Interface i sits at layers[i].1 and couples kn[i] with kn[i+1] (or k0).
    let mut left = Vec::with_capacity(layers.len());
    let mut right = Vec::with_capacity(layers.len());
    for i in 0..layers.len() {
        let r_i = layers[i].1;
        left.push(ModeTables::build(l_max, kn[i] * r_i)?);
        let k_next = if i + 1 < layers.len() { kn[i + 1] } else { k0 };
        right.push(ModeTables::build(l_max, k_next * r_i)?);
    }

    let mut coeffs = vec![C64::new(0.0, 0.0); l_max + 1];
    for l in 0..=l_max {
        // Interior solution in layer 0 is J_l(k_0^{in} r) (regular at 0);
        // propagate (u, u') outward across interfaces.
        let mut u = C64::new(left[0].j(l), 0.0);
        let mut du = C64::new(kn[0] * left[0].dj(l), 0.0);
        for i in 0..layers.len() - 1 {
            let t = &right[i];
            let k_next = kn[i + 1];
            // Solve a J + b Y = u, k (a J' + b Y') = du using the Wronskian
            // J Y' - J' Y = 2/(pi x).
            let wr = 2.0 / (std::f64::consts::PI * t.x);
            let a = (u * k_next * t.dy(l) - du * t.y(l)) / (k_next * wr);
            let b = (du * t.j(l) - u * k_next * t.dj(l)) / (k_next * wr);
            let far = &left[i + 1];
            u = a * far.j(l) + b * far.y(l);
            du = k_next * (a * far.dj(l) + b * far.dy(l));
        }
        // Match s * (u, du) to i^l J + c H1 at the outer interface.
        let ext = &right[layers.len() - 1];
        let h = C64::new(ext.j(l), ext.y(l));
        let dh = C64::new(ext.dj(l), ext.dy(l));
        let inc = i_pow(l);
        let rhs_u = inc * ext.j(l);
        let rhs_du = inc * k0 * ext.dj(l);
        let det = u * (-k0 * dh) - (-h) * du;
        if det.norm() < 1e-280 {
            return Err(Error::Singular(format!(
                "exterior matching degenerate at mode {l} (r = {r_out})"
            )));
        }
        // Cramer for [u, -h; du, -k0 dh] [s; c] = [rhs_u; rhs_du].
        let c = (u * rhs_du - du * rhs_u) / det;
        coeffs[l] = c;
    }
    Ok(coeffs)
}

/// Total field of a unit plane wave incident along (1, 0) on the measurement
/// circle |x| = r_meas >= last interface, at the requested angles.
pub fn layered_circle_field(
    profile: &RadialProfile,
    k0: f64,
    r_meas: f64,
    angles: &[f64],
) -> Result<LayeredFieldSamples> {
    let r_last = profile.effective_layers().last().map_or(0.0, |l| l.1);
    if r_meas < r_last - 1e-12 {
        return Err(Error::invalid(format!(
            "measurement radius {r_meas} lies inside the outermost interface {r_last}"
        )));
    }
    // Mie-type truncation heuristic plus an explicit tail check.
    let mut l_max = (k0 * r_meas).ceil() as usize + 20;
    let (coeffs, ext) = loop {
        let coeffs = scattering_coefficients(profile, k0, l_max)?;
        let ext = ModeTables::build(l_max, k0 * r_meas)?;
        let scale = coeffs
            .iter()
            .map(|c| c.norm())
            .fold(1e-300f64, f64::max)
            .max(1.0);
        let tail = coeffs[l_max].norm() * ext.j(l_max).abs().max(ext.y(l_max).abs());
        if tail < 1e-12 * scale || l_max > 4000 {
            break (coeffs, ext);
        }
        l_max += 20;
    };

    let mode_at_r: Vec<C64> = (0..=l_max)
        .map(|l| i_pow(l) * ext.j(l) + coeffs[l] * C64::new(ext.j(l), ext.y(l)))
        .collect();

    let values = angles
        .iter()
        .map(|&th| {
            let mut u = mode_at_r[0];
            for (l, t) in mode_at_r.iter().enumerate().skip(1) {
                u += 2.0 * t * (l as f64 * th).cos();
            }
            u
        })
        .collect();
    Ok(LayeredFieldSamples { k0, radius: r_meas, angles: angles.to_vec(), values })
}

/// Uniform angle grid on [0, 2 pi).
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_space_returns_incident_wave() {
        let profile = RadialProfile::new(vec![0.3, 0.6], vec![1.0, 1.0], 1.0).unwrap();
        let angles = uniform_angles(64);
        let field = layered_circle_field(&profile, 3.0, 1.0, &angles).unwrap();
        for (th, u) in angles.iter().zip(&field.values) {
            let inc = C64::new(0.0, 3.0 * th.cos()).exp();
            assert!((u - inc).norm() < 1e-10, "theta = {th}");
        }
    }

    #[test]
    fn per_mode_unitarity_for_real_indices() {
        let profile =
            RadialProfile::new(vec![0.3, 0.6, 1.0], vec![0.49, 9.0, 1.0], 1.0).unwrap();
        let coeffs = scattering_coefficients(&profile, 6.5, 40).unwrap();
        for (l, c) in coeffs.iter().enumerate() {
            let s = C64::new(1.0, 0.0) + 2.0 * c / i_pow(l);
            assert!(
                (s.norm() - 1.0).abs() < 1e-10,
                "mode {l}: |S| = {}",
                s.norm()
            );
        }
    }

    #[test]
    fn profile_sorting_and_lookup() {
        let p = RadialProfile::from_point(&[0.7, 0.3, 2.0, 5.0], 1.0);
        assert_eq!(p.breakpoints, vec![0.3, 0.7]);
        assert_eq!(p.values, vec![5.0, 2.0]);
        assert_eq!(p.value_at(0.1, 1.0), 5.0);
        assert_eq!(p.value_at(0.5, 1.0), 2.0);
        assert_eq!(p.value_at(0.9, 1.0), 1.0);
    }

    #[test]
    fn simplify_merges_and_trims() {
        let p = RadialProfile::new(vec![0.4, 0.4, 0.8, 1.0], vec![2.0, 7.0, 2.0, 1.0], 1.0)
            .unwrap();
        let s = p.simplified(1e-9, 1.0);
        assert_eq!(s.breakpoints, vec![0.8]);
        assert_eq!(s.values, vec![2.0]);
    }

    #[test]
    fn invalid_profiles_rejected() {
        assert!(RadialProfile::new(vec![0.5, 0.2], vec![1.0, 1.0], 1.0).is_err());
        assert!(RadialProfile::new(vec![0.5], vec![1.0, 2.0], 1.0).is_err());
        assert!(RadialProfile::new(vec![1.5], vec![1.0], 1.0).is_err());
    }
}
