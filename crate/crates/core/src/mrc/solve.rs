//! Random multi-point solver for the sound-soft direct obstacle problem:
//! per iteration a fresh batch of interior source points is drawn, the
//! boundary discrepancy is minimized over outgoing-wave coefficients by the
//! spectral-cutoff least squares, and the fitted field is accumulated until
//! the boundary residual reaches its target.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{mean_norm, svd_min, CMat};
use crate::mrc::boundary::{BoundaryMesh, Shape};
use crate::specfun::{bessel_j_array, bessel_y_array, sph_harmonic, sph_hankel_norm_array};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MrcParams {
    /// Expansion order: 2D uses l = -L..=L, 3D uses l = 0..=L with all m.
    pub l: usize,
    /// Source points drawn per iteration.
    pub j: usize,
    /// Target boundary residual.
    pub eps: f64,
    /// Iteration budget.
    pub n_max: usize,
    /// Spectral cutoff for the least-squares solve.
    pub w_min: f64,
}

impl MrcParams {
    /// 2D defaults: single random source per iteration, order 5.
    pub fn default_2d() -> Self {
        MrcParams { l: 5, j: 1, eps: 1e-4, n_max: 6000, w_min: 1e-12 }
    }

    /// 3D defaults: monopole batch of 80 sources.
    pub fn default_3d() -> Self {
        MrcParams { l: 0, j: 80, eps: 1e-3, n_max: 6000, w_min: 1e-12 }
    }
}

/// One batch member: an interior point and its expansion coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MrcSource {
    pub point: [f64; 3],
    pub coeffs_re: Vec<f64>,
    pub coeffs_im: Vec<f64>,
}

impl MrcSource {
    fn coeff(&self, i: usize) -> C64 {
        C64::new(self.coeffs_re[i], self.coeffs_im[i])
    }
}

/// Accumulated solution of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MrcSolution {
    pub dim: u8,
    pub shape: Shape,
    pub k: f64,
    pub alpha: [f64; 3],
    pub l: usize,
    pub sources: Vec<MrcSource>,
    pub r_min: f64,
    pub iterations: usize,
    pub target_eps: f64,
}

impl MrcSolution {
    pub fn converged(&self) -> bool {
        self.r_min <= self.target_eps
    }

    fn basis_len(&self) -> usize {
        basis_len(self.dim, self.l)
    }
}

fn basis_len(dim: u8, l: usize) -> usize {
    if dim == 2 { 2 * l + 1 } else { (l + 1) * (l + 1) }
}

/// e^{-i l pi / 2} for signed l.
fn minus_i_pow(l: i64) -> C64 {
    match l.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, -1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 1.0),
    }
}

/// Basis values psi_l(x, source) for all orders at one evaluation point.
fn basis_at(dim: u8, l_max: usize, k: f64, x: &[f64; 3], source: &[f64; 3]) -> Result<Vec<C64>> {
    let dx = x[0] - source[0];
    let dy = x[1] - source[1];
    let dz = x[2] - source[2];
    if dim == 2 {
        let r = (dx * dx + dy * dy).sqrt();
        if r < 1e-14 {
            return Err(Error::domain("evaluation point coincides with a source"));
        }
        let jj = bessel_j_array(l_max, k * r)?;
        let yy = bessel_y_array(l_max, k * r)?;
        let unit = C64::new(dx / r, dy / r);
        // Positive powers of e^{i theta}.
        let mut pows = Vec::with_capacity(l_max + 1);
        let mut acc = C64::new(1.0, 0.0);
        for _ in 0..=l_max {
            pows.push(acc);
            acc *= unit;
        }
        let mut out = vec![C64::new(0.0, 0.0); 2 * l_max + 1];
        for l in -(l_max as i64)..=(l_max as i64) {
            let la = l.unsigned_abs() as usize;
            let h = C64::new(jj[la], yy[la]);
            let sign = if l < 0 && la % 2 == 1 { -1.0 } else { 1.0 };
            let phase = if l >= 0 { pows[la] } else { pows[la].conj() };
            out[(l + l_max as i64) as usize] = sign * h * phase;
        }
        Ok(out)
    } else {
        let r = (dx * dx + dy * dy + dz * dz).sqrt();
        if r < 1e-14 {
            return Err(Error::domain("evaluation point coincides with a source"));
        }
        let h = sph_hankel_norm_array(l_max, k * r)?;
        let theta = (dz / r).clamp(-1.0, 1.0).acos();
        let phi = dy.atan2(dx);
        let mut out = Vec::with_capacity((l_max + 1) * (l_max + 1));
        for l in 0..=l_max {
            for m in -(l as i64)..=(l as i64) {
                out.push(sph_harmonic(l, m, theta, phi)? * h[l]);
            }
        }
        Ok(out)
    }
}

/// Runs the iteration. Failure to reach the target is not an error: the
/// returned solution carries the attained residual and iteration count.
pub fn mrc_solve(
    mesh: &BoundaryMesh,
    k: f64,
    alpha: [f64; 3],
    params: &MrcParams,
    seed: u64,
) -> Result<MrcSolution> {
    if k <= 0.0 {
        return Err(Error::invalid("wavenumber must be positive"));
    }
    let m = mesh.len();
    let nb = basis_len(mesh.dim, params.l);
    let ncols = nb * params.j;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // g starts as the incident trace on the boundary.
    let mut g: Vec<C64> = mesh
        .nodes
        .iter()
        .map(|p| C64::new(0.0, k * (alpha[0] * p[0] + alpha[1] * p[1] + alpha[2] * p[2])).exp())
        .collect();
    let mut r_min = mean_norm(&g);
    let mut sources: Vec<MrcSource> = Vec::new();
    let mut iterations = 0usize;

    while r_min > params.eps && iterations < params.n_max {
        iterations += 1;
        let batch: Vec<[f64; 3]> = (0..params.j).map(|_| mesh.sample_interior(&mut rng)).collect();

        let mut design = CMat::zeros(m, ncols);
        for (jsrc, src) in batch.iter().enumerate() {
            for (i, node) in mesh.nodes.iter().enumerate() {
                let vals = basis_at(mesh.dim, params.l, k, node, src)?;
                for (b, v) in vals.iter().enumerate() {
                    design.set(i, jsrc * nb + b, *v);
                }
            }
        }
        let (coeffs, resid) = svd_min(&design, &g, params.w_min);

        // Accumulate the fitted combination into the solution and the
        // boundary trace.
        let fit = design.matvec(&coeffs);
        for (gi, fi) in g.iter_mut().zip(&fit) {
            *gi += fi;
        }
        for (jsrc, src) in batch.iter().enumerate() {
            let slice = &coeffs[jsrc * nb..(jsrc + 1) * nb];
            sources.push(MrcSource {
                point: *src,
                coeffs_re: slice.iter().map(|c| c.re).collect(),
                coeffs_im: slice.iter().map(|c| c.im).collect(),
            });
        }
        r_min = resid;
    }

    Ok(MrcSolution {
        dim: mesh.dim,
        shape: mesh.shape,
        k,
        alpha,
        l: params.l,
        sources,
        r_min,
        iterations,
        target_eps: params.eps,
    })
}

/// Evaluates the accumulated scattered-field expansion at exterior points.
pub fn mrc_eval(sol: &MrcSolution, points: &[[f64; 3]]) -> Result<Vec<C64>> {
    let nb = sol.basis_len();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if sol.shape.contains(p) {
            return Err(Error::domain(format!(
                "evaluation point {p:?} lies inside the obstacle"
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for src in &sol.sources {
            let vals = basis_at(sol.dim, sol.l, sol.k, p, &src.point)?;
            for b in 0..nb {
                acc += src.coeff(b) * vals[b];
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Far-field pattern of the accumulated expansion: the leading coefficient
/// of e^{ikr}/sqrt(r) in 2D and of e^{ikr}/r in 3D.
pub fn mrc_far_field(sol: &MrcSolution, directions: &[[f64; 3]]) -> Vec<C64> {
    let mut out = Vec::with_capacity(directions.len());
    for d in directions {
        let mut acc = C64::new(0.0, 0.0);
        if sol.dim == 2 {
            let theta = d[1].atan2(d[0]);
            let l_max = sol.l as i64;
            for src in &sol.sources {
                let shift = C64::new(
                    0.0,
                    -sol.k * (d[0] * src.point[0] + d[1] * src.point[1]),
                )
                .exp();
                for l in -l_max..=l_max {
                    let c = src.coeff((l + l_max) as usize);
                    let angular = C64::new(0.0, l as f64 * theta).exp();
                    acc += c * minus_i_pow(l) * angular * shift;
                }
            }
            let pref = (2.0 / (std::f64::consts::PI * sol.k)).sqrt()
                * C64::new(0.0, -std::f64::consts::FRAC_PI_4).exp();
            out.push(pref * acc);
        } else {
            let theta = (d[2] / norm3(d)).clamp(-1.0, 1.0).acos();
            let phi = d[1].atan2(d[0]);
            for src in &sol.sources {
                let shift = C64::new(
                    0.0,
                    -sol.k * (d[0] * src.point[0] + d[1] * src.point[1] + d[2] * src.point[2]),
                )
                .exp();
                let mut idx = 0usize;
                for l in 0..=sol.l {
                    for m in -(l as i64)..=(l as i64) {
                        let y = sph_harmonic(l, m, theta, phi).expect("|m| <= l by construction");
                        acc += src.coeff(idx) * y * shift;
                        idx += 1;
                    }
                }
            }
            out.push(acc / sol.k);
        }
    }
    out
}

fn norm3(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}
