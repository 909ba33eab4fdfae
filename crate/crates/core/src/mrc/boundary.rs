//! Obstacle boundaries for the multi-point solver: parametrized 2D curves,
//! quasi-uniform 3D surfaces, membership tests and interior sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported obstacle geometries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Ellipse { a: f64, b: f64 },
    /// The kite curve (-0.65 + cos t + 0.65 cos 2t, 1.5 sin t).
    Kite,
    Triangle { v: [[f64; 2]; 3] },
    Circle { a: f64 },
    Sphere { r: f64 },
    /// The cube [-s, s]^3.
    Cube { s: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
}

impl Shape {
    pub fn dim(&self) -> u8 {
        match self {
            Shape::Ellipse { .. } | Shape::Kite | Shape::Triangle { .. } | Shape::Circle { .. } => 2,
            _ => 3,
        }
    }

    fn curve_2d(&self, t: f64) -> [f64; 2] {
        match *self {
            Shape::Ellipse { a, b } => [a * t.cos(), b * t.sin()],
            Shape::Kite => [-0.65 + t.cos() + 0.65 * (2.0 * t).cos(), 1.5 * t.sin()],
            Shape::Circle { a } => [a * t.cos(), a * t.sin()],
            _ => unreachable!("not a parametrized 2D curve"),
        }
    }

    /// Random point on the boundary surface (uniform in parameter, not in
    /// area; used only to seed interior sampling).
    fn random_surface_point(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        match *self {
            Shape::Ellipse { .. } | Shape::Kite | Shape::Circle { .. } => {
                let t = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                let p = self.curve_2d(t);
                [p[0], p[1], 0.0]
            }
            Shape::Triangle { v } => {
                let e = [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])];
                let lens: Vec<f64> = e
                    .iter()
                    .map(|(a, b)| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt())
                    .collect();
                let total: f64 = lens.iter().sum();
                let mut s = rng.gen_range(0.0..total);
                for (edge, len) in e.iter().zip(&lens) {
                    if s <= *len {
                        let t = s / len;
                        return [
                            edge.0[0] + t * (edge.1[0] - edge.0[0]),
                            edge.0[1] + t * (edge.1[1] - edge.0[1]),
                            0.0,
                        ];
                    }
                    s -= len;
                }
                [v[0][0], v[0][1], 0.0]
            }
            Shape::Sphere { r } => {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                let rho = (1.0 - z * z).sqrt();
                [r * rho * phi.cos(), r * rho * phi.sin(), r * z]
            }
            Shape::Ellipsoid { a, b, c } => {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                let rho = (1.0 - z * z).sqrt();
                [a * rho * phi.cos(), b * rho * phi.sin(), c * z]
            }
            Shape::Cube { s } => {
                let u: f64 = rng.gen_range(-s..s);
                let w: f64 = rng.gen_range(-s..s);
                match rng.gen_range(0..6) {
                    0 => [u, w, s],
                    1 => [u, w, -s],
                    2 => [u, s, w],
                    3 => [u, -s, w],
                    4 => [s, u, w],
                    _ => [-s, u, w],
                }
            }
        }
    }

    /// Strict interior test.
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        match *self {
            Shape::Ellipse { a, b } => (p[0] / a).powi(2) + (p[1] / b).powi(2) < 1.0,
            Shape::Circle { a } => p[0] * p[0] + p[1] * p[1] < a * a,
            Shape::Kite => {
                let poly: Vec<[f64; 2]> = (0..1024)
                    .map(|i| self.curve_2d(2.0 * std::f64::consts::PI * i as f64 / 1024.0))
                    .collect();
                point_in_polygon(&[p[0], p[1]], &poly)
            }
            Shape::Triangle { v } => {
                let sign = |a: &[f64; 2], b: &[f64; 2], q: &[f64; 2]| {
                    (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
                };
                let q = [p[0], p[1]];
                let d0 = sign(&v[0], &v[1], &q);
                let d1 = sign(&v[1], &v[2], &q);
                let d2 = sign(&v[2], &v[0], &q);
                (d0 > 0.0 && d1 > 0.0 && d2 > 0.0) || (d0 < 0.0 && d1 < 0.0 && d2 < 0.0)
            }
            Shape::Sphere { r } => p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < r * r,
            Shape::Cube { s } => p.iter().all(|c| c.abs() < s),
            Shape::Ellipsoid { a, b, c } => {
                (p[0] / a).powi(2) + (p[1] / b).powi(2) + (p[2] / c).powi(2) < 1.0
            }
        }
    }
}

/// Discretized obstacle boundary with its interior-sampling descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryMesh {
    pub shape: Shape,
    pub nodes: Vec<[f64; 3]>,
    pub dim: u8,
    /// Scale window of the star-shaped interior sampler.
    pub sampler_window: (f64, f64),
}

/// Builds the node set: uniform parameter values for 2D curves, arc-length
/// uniform nodes for triangles, a Fibonacci spiral for spheres/ellipsoids,
/// and per-face grids (requiring M = 6 n^2) for cubes.
pub fn make_boundary(shape: Shape, m: usize) -> Result<BoundaryMesh> {
    if m < 8 {
        return Err(Error::invalid("need at least 8 boundary nodes"));
    }
    let nodes: Vec<[f64; 3]> = match shape {
        Shape::Ellipse { .. } | Shape::Kite | Shape::Circle { .. } => (0..m)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                let p = shape.curve_2d(t);
                [p[0], p[1], 0.0]
            })
            .collect(),
        Shape::Triangle { v } => {
            let e = [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])];
            let lens: Vec<f64> =
                e.iter().map(|(a, b)| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()).collect();
            let perimeter: f64 = lens.iter().sum();
            (0..m)
                .map(|i| {
                    let mut s = perimeter * i as f64 / m as f64;
                    for (edge, len) in e.iter().zip(&lens) {
                        if s <= *len {
                            let t = s / len;
                            return [
                                edge.0[0] + t * (edge.1[0] - edge.0[0]),
                                edge.0[1] + t * (edge.1[1] - edge.0[1]),
                                0.0,
                            ];
                        }
                        s -= len;
                    }
                    [v[0][0], v[0][1], 0.0]
                })
                .collect()
        }
        Shape::Sphere { .. } | Shape::Ellipsoid { .. } => {
            let (a, b, c) = match shape {
                Shape::Sphere { r } => (r, r, r),
                Shape::Ellipsoid { a, b, c } => (a, b, c),
                _ => unreachable!(),
            };
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / m as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    [a * rho * phi.cos(), b * rho * phi.sin(), c * z]
                })
                .collect()
        }
        Shape::Cube { s } => {
            let n = ((m / 6) as f64).sqrt().round() as usize;
            if 6 * n * n != m {
                return Err(Error::invalid(format!(
                    "cube meshes need M = 6 n^2 nodes, got {m}"
                )));
            }
            let mut nodes = Vec::with_capacity(m);
            let coord = |i: usize| -s + 2.0 * s * (i as f64 + 0.5) / n as f64;
            for i in 0..n {
                for j in 0..n {
                    let (u, w) = (coord(i), coord(j));
                    nodes.push([u, w, s]);
                    nodes.push([u, w, -s]);
                    nodes.push([u, s, w]);
                    nodes.push([u, -s, w]);
                    nodes.push([s, u, w]);
                    nodes.push([-s, u, w]);
                }
            }
            nodes
        }
    };
    let sampler_window = if shape.dim() == 2 { (0.5, 0.985) } else { (0.1, 0.6) };
    Ok(BoundaryMesh { shape, nodes, dim: shape.dim(), sampler_window })
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mesh translated by an offset (the shape's membership tests move
    /// along with it only for evaluation purposes; used for off-center
    /// scatterer studies).
    pub fn translated(&self, offset: [f64; 2]) -> BoundaryMesh {
        BoundaryMesh {
            shape: self.shape,
            nodes: self
                .nodes
                .iter()
                .map(|p| [p[0] + offset[0], p[1] + offset[1], p[2]])
                .collect(),
            dim: self.dim,
            sampler_window: self.sampler_window,
        }
    }

    pub fn centroid(&self) -> [f64; 3] {
        let mut c = [0.0f64; 3];
        for p in &self.nodes {
            for i in 0..3 {
                c[i] += p[i];
            }
        }
        for ci in c.iter_mut() {
            *ci /= self.nodes.len() as f64;
        }
        c
    }

    /// Overrides the interior sampler's scale window.
    pub fn with_sampler_window(mut self, lo: f64, hi: f64) -> Self {
        self.sampler_window = (lo, hi);
        self
    }

    /// Random interior point: a random boundary point pulled toward the
    /// centroid by a uniform scale from the sampler window. The default 2D
    /// window hugs the boundary moderately (sources there resolve boundary
    /// detail without injecting node-scale spikes); the 3D default sits
    /// deep, where monopole batches represent smooth traces best. Points
    /// that leave a nonconvex body are resampled.
    pub fn sample_interior(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        let (w_lo, w_hi) = self.sampler_window;
        let c = self.centroid();
        loop {
            let b = self.shape.random_surface_point(rng);
            let w: f64 = rng.gen_range(w_lo..w_hi);
            let q = [
                c[0] + w * (b[0] - c[0]),
                c[1] + w * (b[1] - c[1]),
                c[2] + w * (b[2] - c[2]),
            ];
            if self.shape.contains(&q) {
                return q;
            }
        }
    }
}

fn point_in_polygon(p: &[f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if ((pi[1] > p[1]) != (pj[1] > p[1]))
            && (p[0] < (pj[0] - pi[0]) * (p[1] - pi[1]) / (pj[1] - pi[1]) + pi[0])
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}
