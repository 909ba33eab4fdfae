//! Boundary reconstruction from support samples: the envelope of tangent
//! lines (via periodic finite differences of the support function) and the
//! convex polygon cut out by the tangent half-planes.

use crate::error::{Error, Result};
use crate::sfm::support::SupportSamples;

/// Envelope points x(t) = (p cos t - p' sin t, p sin t + p' cos t) on a
/// uniform angle grid, with p' by periodic central differences.
pub fn reconstruct_boundary(samples: &SupportSamples) -> Result<Vec<[f64; 2]>> {
    let n = samples.len();
    if n < 8 {
        return Err(Error::invalid("need at least 8 uniformly spaced directions"));
    }
    let h = samples.angles[1] - samples.angles[0];
    for w in samples.angles.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 {
            return Err(Error::invalid("angle grid must be uniform"));
        }
    }
    let p = &samples.values;
    Ok((0..n)
        .map(|i| {
            let dp = (p[(i + 1) % n] - p[(i + n - 1) % n]) / (2.0 * h);
            let t = samples.angles[i];
            [
                p[i] * t.cos() - dp * t.sin(),
                p[i] * t.sin() + dp * t.cos(),
            ]
        })
        .collect())
}

/// Intersection of the half-planes {x . l_i >= d_i} as a counterclockwise
/// vertex list. Errors when the intersection is empty (inconsistent data).
pub fn convex_hull_halfplanes(samples: &SupportSamples) -> Result<Vec<[f64; 2]>> {
    if samples.len() < 3 {
        return Err(Error::invalid("need at least 3 directions"));
    }
    // Clip a huge bounding square successively by each half-plane.
    let big = 1e6;
    let mut poly: Vec<[f64; 2]> =
        vec![[-big, -big], [big, -big], [big, big], [-big, big]];
    for i in 0..samples.len() {
        let l = samples.direction(i);
        let d = samples.values[i];
        let keep = |p: &[f64; 2]| p[0] * l[0] + p[1] * l[1] >= d - 1e-12;
        let mut next: Vec<[f64; 2]> = Vec::with_capacity(poly.len() + 1);
        for j in 0..poly.len() {
            let a = poly[j];
            let b = poly[(j + 1) % poly.len()];
            let (ka, kb) = (keep(&a), keep(&b));
            if ka {
                next.push(a);
            }
            if ka != kb {
                // Intersection of segment a-b with the line x.l = d.
                let fa = a[0] * l[0] + a[1] * l[1] - d;
                let fb = b[0] * l[0] + b[1] * l[1] - d;
                let t = fa / (fa - fb);
                next.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        poly = next;
        if poly.is_empty() {
            return Err(Error::invalid("support data produce an empty intersection"));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_samples(n: usize, f: impl Fn(f64) -> f64) -> SupportSamples {
        let angles: Vec<f64> = (0..n)
            .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64)
            .collect();
        let values = angles.iter().map(|&t| f(t)).collect();
        SupportSamples { angles, values }
    }

    #[test]
    fn constant_support_gives_unit_circle() {
        let s = uniform_samples(16, |_| -1.0);
        let pts = reconstruct_boundary(&s).unwrap();
        for p in pts {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_circle_support_reconstructs_the_shifted_circle() {
        // p(t) = -1 + 0.3 cos t is the support of the unit circle centered
        // at (0.3, 0); the analytic envelope is (0.3 - cos t, -sin t).
        let s = uniform_samples(64, |t| -1.0 + 0.3 * t.cos());
        let pts = reconstruct_boundary(&s).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let t = s.angles[i];
            // Finite differences perturb the envelope at O(h^2).
            assert!((p[0] - (0.3 - t.cos())).abs() < 2e-3, "i={i}");
            assert!((p[1] - (-t.sin())).abs() < 2e-3);
        }
    }

    #[test]
    fn four_axis_halfplanes_make_the_unit_square() {
        let angles = vec![
            0.0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::PI,
            1.5 * std::f64::consts::PI,
        ];
        let samples = SupportSamples { angles, values: vec![-1.0; 4] };
        let poly = convex_hull_halfplanes(&samples).unwrap();
        assert_eq!(poly.len(), 4);
        for p in poly {
            assert!((p[0].abs() - 1.0).abs() < 1e-9);
            assert!((p[1].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn disc_halfplanes_make_a_polygon_near_the_disc() {
        let s = uniform_samples(16, |_| -1.0);
        let poly = convex_hull_halfplanes(&s).unwrap();
        assert_eq!(poly.len(), 16);
        let max_err = 1.0 / (std::f64::consts::PI / 16.0).cos() - 1.0;
        for p in poly {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(r >= 1.0 - 1e-9 && r <= 1.0 + max_err + 1e-9, "r = {r}");
        }
    }

    #[test]
    fn inconsistent_halfplanes_rejected() {
        // d(l) = +2 for opposite directions is unsatisfiable.
        let angles = vec![0.0, std::f64::consts::PI, std::f64::consts::FRAC_PI_2];
        let samples = SupportSamples { angles, values: vec![2.0, 2.0, 0.0] };
        assert!(convex_hull_halfplanes(&samples).is_err());
    }

    #[test]
    fn nonuniform_grid_rejected() {
        let samples = SupportSamples {
            angles: vec![0.0, 0.1, 0.3, 0.5, 0.9, 1.4, 2.0, 2.8],
            values: vec![-1.0; 8],
        };
        assert!(reconstruct_boundary(&samples).is_err());
    }
}
