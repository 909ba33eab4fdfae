//! High-frequency (specular point) amplitude approximation for smooth,
//! strictly convex 2D obstacles:
//!
//!   A(alpha', alpha) ~ -1/2 sqrt(|alpha - alpha'| / curvature) *
//!                      e^{ik |alpha - alpha'| d(l)},
//!
//! where l = (alpha - alpha')/|alpha - alpha'| and d(l) is the support
//! function, the l-component of the specular point.

use crate::error::{Error, Result};
use crate::C64;

/// Convex boundary described by its specular geometry: for a unit vector l,
/// the boundary point minimizing s . l (the specular point of incidence
/// direction l) and the curvature there.
pub trait ConvexBoundary: Sync {
    fn specular_point(&self, l: [f64; 2]) -> [f64; 2];
    fn curvature_at(&self, l: [f64; 2]) -> f64;

    /// Support function d(l) = s0(l) . l.
    fn support(&self, l: [f64; 2]) -> f64 {
        let s = self.specular_point(l);
        s[0] * l[0] + s[1] * l[1]
    }
}

/// Circle of radius a centered at `center`.
#[derive(Debug, Clone, Copy)]
pub struct CircleBoundary {
    pub a: f64,
    pub center: [f64; 2],
}

impl ConvexBoundary for CircleBoundary {
    fn specular_point(&self, l: [f64; 2]) -> [f64; 2] {
        [self.center[0] - self.a * l[0], self.center[1] - self.a * l[1]]
    }

    fn curvature_at(&self, _l: [f64; 2]) -> f64 {
        1.0 / self.a
    }
}

/// Specular-point amplitude approximation. Rejects alpha = alpha', where
/// the bisecting direction l is undefined.
pub fn kirchhoff_amplitude(
    boundary: &dyn ConvexBoundary,
    alpha_out: [f64; 2],
    alpha_in: [f64; 2],
    k: f64,
) -> Result<C64> {
    let dx = alpha_in[0] - alpha_out[0];
    let dy = alpha_in[1] - alpha_out[1];
    let sep = (dx * dx + dy * dy).sqrt();
    if sep < 1e-12 {
        return Err(Error::domain(
            "specular direction undefined for alpha = alpha'",
        ));
    }
    let l = [dx / sep, dy / sep];
    let d = boundary.support(l);
    let kappa = boundary.curvature_at(l);
    let magnitude = 0.5 * (sep / kappa).sqrt();
    Ok(-magnitude * C64::new(0.0, k * sep * d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_magnitude() {
        // kappa = 1 for the unit circle: |A| = sqrt(|alpha - alpha'|)/2.
        let circle = CircleBoundary { a: 1.0, center: [0.0, 0.0] };
        let a = kirchhoff_amplitude(&circle, [-1.0, 0.0], [1.0, 0.0], 2.0).unwrap();
        assert!((a.norm() - 0.5 * 2.0f64.sqrt()) < 1e-14);
    }

    #[test]
    fn support_of_shifted_circle() {
        let circle = CircleBoundary { a: 1.0, center: [6.0, 2.0] };
        assert!((circle.support([1.0, 0.0]) - 5.0).abs() < 1e-14);
        assert!((circle.support([0.0, 1.0]) - 1.0).abs() < 1e-14);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let d = circle.support([inv_sqrt2, inv_sqrt2]);
        assert!((d - (8.0 * inv_sqrt2 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn coincident_directions_rejected() {
        let circle = CircleBoundary { a: 1.0, center: [0.0, 0.0] };
        assert!(kirchhoff_amplitude(&circle, [1.0, 0.0], [1.0, 0.0], 1.0).is_err());
    }
}
