//! Born-type point-inclusion model for subsurface identification: point
//! sources and detectors on the surface plane, small scatterers described by
//! a position and a total intensity.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// One small inhomogeneity: center of gravity and total intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inclusion {
    pub z: [f64; 3],
    pub v: f64,
}

/// A collection of point inclusions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InclusionSet {
    pub items: Vec<Inclusion>,
}

impl InclusionSet {
    pub fn new(items: Vec<Inclusion>) -> Self {
        InclusionSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Sorted by intensity, strongest first; ties broken by coordinates.
    pub fn sorted_by_intensity(mut self) -> Self {
        self.items.sort_by(|a, b| {
            b.v.partial_cmp(&a.v)
                .unwrap()
                .then(a.z[0].partial_cmp(&b.z[0]).unwrap())
                .then(a.z[1].partial_cmp(&b.z[1]).unwrap())
                .then(a.z[2].partial_cmp(&b.z[2]).unwrap())
        });
        self
    }
}

/// One source-detector pair on the measurement plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub x: [f64; 3],
    pub y: [f64; 3],
}

/// Source-detector layout at a fixed wavenumber. All points lie on the
/// plane x3 = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceDetectorPairs {
    pub pairs: Vec<Pair>,
    pub k: f64,
}

impl SourceDetectorPairs {
    pub fn new(pairs: Vec<Pair>, k: f64) -> Result<Self> {
        if k <= 0.0 {
            return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
        }
        if pairs
            .iter()
            .any(|p| p.x[2].abs() > 1e-12 || p.y[2].abs() > 1e-12)
        {
            return Err(Error::invalid("sources and detectors must lie on the plane x3 = 0"));
        }
        Ok(SourceDetectorPairs { pairs, k })
    }

    /// Cartesian product layout: every source paired with every detector.
    pub fn from_grids(sources: &[[f64; 3]], detectors: &[[f64; 3]], k: f64) -> Result<Self> {
        let pairs = detectors
            .iter()
            .flat_map(|&y| sources.iter().map(move |&x| Pair { x, y }))
            .collect();
        SourceDetectorPairs::new(pairs, k)
    }
}

/// Reduced surface measurements f_j = (u - g)/k^2 for each pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsurfaceData {
    pub f: Vec<C64>,
    pub pairs: SourceDetectorPairs,
    pub noise_level: f64,
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Free-space point source: g(x, y, k) = e^{ik|x-y|} / (4 pi |x-y|).
pub fn greens(x: &[f64; 3], y: &[f64; 3], k: f64) -> C64 {
    let r = dist3(x, y);
    C64::new(0.0, k * r).exp() / (4.0 * std::f64::consts::PI * r)
}

/// Kernel of one pair at a trial point, G_j(z) = g(x_j, z) g(y_j, z).
pub fn pair_kernel(pair: &Pair, z: &[f64; 3], k: f64) -> C64 {
    greens(&pair.x, z, k) * greens(&pair.y, z, k)
}

/// Generates the reduced measurements of an inclusion set,
/// f_j = sum_m G_j(z_m) v_m, optionally perturbed multiplicatively:
/// f_j (1 + (0.5 - zeta_j) * noise_level) with zeta_j uniform on [0, 1].
pub fn subsurface_data(
    incl: &InclusionSet,
    pairs: &SourceDetectorPairs,
    noise_level: f64,
    seed: u64,
) -> Result<SubsurfaceData> {
    if noise_level < 0.0 {
        return Err(Error::invalid("noise level must be nonnegative"));
    }
    for (j, p) in pairs.pairs.iter().enumerate() {
        for (m, inc) in incl.items.iter().enumerate() {
            if dist3(&p.x, &inc.z) < 1e-12 || dist3(&p.y, &inc.z) < 1e-12 {
                return Err(Error::domain(format!(
                    "inclusion {m} coincides with a point of pair {j}"
                )));
            }
        }
    }
    let mut f: Vec<C64> = pairs
        .pairs
        .iter()
        .map(|p| {
            incl.items
                .iter()
                .map(|inc| pair_kernel(p, &inc.z, pairs.k) * inc.v)
                .sum()
        })
        .collect();
    if noise_level > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for fj in f.iter_mut() {
            let zeta: f64 = rng.gen::<f64>();
            *fj *= 1.0 + (0.5 - zeta) * noise_level;
        }
    }
    Ok(SubsurfaceData {
        f,
        pairs: pairs.clone(),
        noise_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_pair(k: f64) -> SourceDetectorPairs {
        SourceDetectorPairs::new(
            vec![Pair { x: [0.0, 0.0, 0.0], y: [1.0, 0.0, 0.0] }],
            k,
        )
        .unwrap()
    }

    #[test]
    fn empty_set_gives_zero_data() {
        let data = subsurface_data(&InclusionSet::default(), &one_pair(5.0), 0.0, 1).unwrap();
        assert_eq!(data.f.len(), 1);
        assert_eq!(data.f[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn single_inclusion_matches_hand_evaluation() {
        // Direct evaluation of the two point-source factors.
        let k = 2.0;
        let z = [0.3, 0.2, 0.5];
        let v = 1.5;
        let incl = InclusionSet::new(vec![Inclusion { z, v }]);
        let data = subsurface_data(&incl, &one_pair(k), 0.0, 1).unwrap();

        let r1 = (0.3f64 * 0.3 + 0.2 * 0.2 + 0.5 * 0.5).sqrt();
        let r2 = (0.7f64 * 0.7 + 0.2 * 0.2 + 0.5 * 0.5).sqrt();
        let g1 = C64::new(0.0, k * r1).exp() / (4.0 * std::f64::consts::PI * r1);
        let g2 = C64::new(0.0, k * r2).exp() / (4.0 * std::f64::consts::PI * r2);
        let expect = g1 * g2 * v;
        assert!((data.f[0] - expect).norm() < 1e-15);
    }

    #[test]
    fn reciprocity_in_pair_swap() {
        let k = 5.0;
        let z = [0.4, -0.3, 0.6];
        let fwd = Pair { x: [-1.0, 0.5, 0.0], y: [0.8, -0.2, 0.0] };
        let rev = Pair { x: fwd.y, y: fwd.x };
        let a = pair_kernel(&fwd, &z, k);
        let b = pair_kernel(&rev, &z, k);
        assert!((a - b).norm() < 1e-16);
    }

    #[test]
    fn coincident_points_rejected() {
        let incl = InclusionSet::new(vec![Inclusion { z: [0.0, 0.0, 0.0], v: 1.0 }]);
        assert!(subsurface_data(&incl, &one_pair(1.0), 0.0, 1).is_err());
    }

    #[test]
    fn noise_is_reproducible_and_bounded() {
        let incl = InclusionSet::new(vec![Inclusion { z: [0.1, 0.1, 0.4], v: 1.0 }]);
        let pairs = one_pair(5.0);
        let clean = subsurface_data(&incl, &pairs, 0.0, 9).unwrap();
        let a = subsurface_data(&incl, &pairs, 0.1, 9).unwrap();
        let b = subsurface_data(&incl, &pairs, 0.1, 9).unwrap();
        assert_eq!(a.f, b.f);
        let ratio = (a.f[0] / clean.f[0]).re;
        assert!((ratio - 1.0).abs() <= 0.05 + 1e-12);
    }
}
