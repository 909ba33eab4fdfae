//! Derivative-free minimization engines.
//!
//! [`powell_minimize`] is the deterministic workhorse; the global methods
//! combine it with seeded random sampling: [`hsd_minimize`] (reduction and
//! recycling of strong candidates), [`mslm_minimize`] (clustered multistart
//! with a shrinking critical distance), and [`irrs_minimize`] (reduced random
//! search stopped by the stability index).
//!
//! All engines stay strictly inside their box domain and are reproducible
//! for a fixed seed.

mod hsd;
mod irrs;
mod lmm;
mod mslm;
mod powell;

pub use hsd::{hsd_minimize, HsdParams, HsdResult, InclusionObjective};
pub use irrs::{irrs_minimize, IrrsParams, IrrsResult};
pub use lmm::{lmm_local, LmmParams};
pub use mslm::{mslm_minimize, LocalMinimum, MslmParams, MslmResult};
pub use powell::{powell_minimize, PowellParams};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Axis-aligned box of admissible points, optionally with a canonical
/// projection that keeps radius-like coordinates sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// When m > 0, coordinates 0..m are radii kept nondecreasing by a
    /// sorting projection that carries the paired coordinates m..2m along.
    pub sorted_radii: usize,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::invalid("box bounds must have equal, nonzero length"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::invalid("box lower bound exceeds upper bound"));
        }
        Ok(BoxDomain { lower, upper, sorted_radii: 0 })
    }

    /// Box over a layer layout (r_1..r_m, c_1..c_m) with the monotone-radius
    /// constraint enforced by projection.
    pub fn with_sorted_radii(lower: Vec<f64>, upper: Vec<f64>, m: usize) -> Result<Self> {
        if lower.len() != 2 * m {
            return Err(Error::invalid(format!(
                "sorted-radius layout needs dimension 2m = {}, got {}",
                2 * m,
                lower.len()
            )));
        }
        let mut b = BoxDomain::new(lower, upper)?;
        b.sorted_radii = m;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l - 1e-12 && *v <= *u + 1e-12)
    }

    /// Clamp componentwise into the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }

    /// Canonical projection: clamp, then sort the radius block carrying the
    /// paired values along.
    pub fn project(&self, x: &mut [f64]) {
        self.clamp(x);
        let m = self.sorted_radii;
        if m > 0 {
            let mut pairs: Vec<(f64, f64)> = (0..m).map(|i| (x[i], x[m + i])).collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for (i, (r, c)) in pairs.into_iter().enumerate() {
                x[i] = r;
                x[m + i] = c;
            }
        }
    }

    /// Uniform sample (then projected to the canonical form).
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| if l == u { *l } else { rng.gen_range(*l..*u) })
            .collect();
        self.project(&mut x);
        x
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l) * (u - l))
            .sum::<f64>()
            .sqrt()
    }

    /// Concatenation of `n` copies of a base box (for point-cloud layouts).
    pub fn tile(&self, n: usize) -> BoxDomain {
        let mut lower = Vec::with_capacity(self.dim() * n);
        let mut upper = Vec::with_capacity(self.dim() * n);
        for _ in 0..n {
            lower.extend_from_slice(&self.lower);
            upper.extend_from_slice(&self.upper);
        }
        BoxDomain { lower, upper, sorted_radii: 0 }
    }
}

/// Objective callback with a dimension and a shared evaluation counter.
pub struct Objective<'a> {
    dim: usize,
    counter: AtomicU64,
    f: Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>,
}

impl<'a> Objective<'a> {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> f64 + Sync + 'a) -> Self {
        Objective { dim, counter: AtomicU64::new(0), f: Box::new(f) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.counter.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn evals(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }
}

/// Why a minimization stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Objective target or relative-decrease tolerance reached.
    Tolerance,
    /// Stability index fell below its threshold.
    Stability,
    /// Iteration or evaluation budget exhausted.
    Budget,
    /// Statistical confidence that all minima were found.
    Confidence,
}

/// Result summary shared by every engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOutcome {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub stability_index: Option<f64>,
    pub iterations: usize,
    pub evals: u64,
    pub seed: u64,
    pub stopped_by: StopReason,
}

/// A batch of evaluated sample points.
#[derive(Debug, Clone, Default)]
pub struct SampleBatch {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

/// Per-iteration progress record written out as the optimizer trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_value: f64,
    pub stability_index: Option<f64>,
    pub searches: usize,
    pub minima: usize,
}

/// Diameter of a sample under the given metric: the maximum pairwise
/// distance, zero for a singleton.
pub fn stability_index(points: &[Vec<f64>], metric: &(dyn Fn(&[f64], &[f64]) -> f64 + Sync)) -> f64 {
    let mut d = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            d = d.max(metric(&points[i], &points[j]));
        }
    }
    d
}

/// Euclidean distance, the default metric.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn stability_index_trivial_cases() {
        let metric = euclidean;
        assert_eq!(stability_index(&[vec![1.0, 2.0]], &metric), 0.0);
        let two = vec![vec![0.0, 0.0], vec![3.0, 0.0]];
        assert_eq!(stability_index(&two, &metric), 3.0);
    }

    #[test]
    fn stability_index_matches_exhaustive_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let mut best = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    best = best.max(euclidean(&pts[i], &pts[j]));
                }
            }
        }
        assert_eq!(stability_index(&pts, &euclidean), best);
    }

    #[test]
    fn projection_sorts_radius_pairs() {
        let b = BoxDomain::with_sorted_radii(
            vec![0.0, 0.0, -5.0, -5.0],
            vec![10.0, 10.0, 5.0, 5.0],
            2,
        )
        .unwrap();
        let mut x = vec![7.0, 3.0, 1.0, 2.0];
        b.project(&mut x);
        assert_eq!(x, vec![3.0, 7.0, 2.0, 1.0]);
    }

    #[test]
    fn samples_stay_inside_and_reproduce() {
        let b = BoxDomain::new(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let x = b.sample(&mut r1);
            assert!(b.contains(&x));
            assert_eq!(x, b.sample(&mut r2));
        }
    }

    #[test]
    fn degenerate_bounds_rejected() {
        assert!(BoxDomain::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxDomain::new(vec![], vec![]).is_err());
    }
}
