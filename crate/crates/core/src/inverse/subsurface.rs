//! Subsurface point-inclusion inversion: the reduced objective over
//! positions (intensities eliminated by a clamped linear least-squares fit)
//! and the driver delegating the search to the hybrid
//! stochastic-deterministic engine.

use crate::error::{Error, Result};
use crate::forward::subsurface::{pair_kernel, Inclusion, InclusionSet, SubsurfaceData};
use crate::linalg::cholesky_solve;
use crate::optim::{
    hsd_minimize, BoxDomain, HsdParams, InclusionObjective, MinimizeOutcome, TraceRow,
};
use crate::C64;

/// Measurement set, search box and intensity bound of one inversion run.
#[derive(Debug, Clone)]
pub struct SubsurfaceProblem {
    pub data: SubsurfaceData,
    pub boxdom: BoxDomain,
    pub v_max: f64,
}

impl SubsurfaceProblem {
    pub fn new(data: SubsurfaceData, boxdom: BoxDomain, v_max: f64) -> Result<Self> {
        if v_max <= 0.0 {
            return Err(Error::invalid("v_max must be positive"));
        }
        if boxdom.dim() != 3 {
            return Err(Error::invalid("subsurface search box must be 3D"));
        }
        if data.f.len() != data.pairs.pairs.len() {
            return Err(Error::invalid("data length must match pair count"));
        }
        Ok(SubsurfaceProblem { data, boxdom, v_max })
    }
}

/// Best-fit objective over positions: builds the kernel matrix with columns
/// G_j(z_m), solves the real-stacked normal equations with a small ridge,
/// clamps the intensities to [0, v_max] and evaluates the data misfit at the
/// clamped fit. Returns (value, intensities).
pub fn tilde_phi(zs: &[[f64; 3]], problem: &SubsurfaceProblem) -> (f64, Vec<f64>) {
    let pairs = &problem.data.pairs;
    let k = pairs.k;
    let nj = pairs.pairs.len();
    let n = zs.len();
    if n == 0 {
        let value = problem.data.f.iter().map(|f| f.norm_sqr()).sum();
        return (value, Vec::new());
    }

    // Kernel columns.
    let mut kernel = vec![C64::new(0.0, 0.0); nj * n];
    for (m, z) in zs.iter().enumerate() {
        for (j, pair) in pairs.pairs.iter().enumerate() {
            kernel[m * nj + j] = pair_kernel(pair, z, k);
        }
    }

    // Real-stacked normal equations: Re(G^H G) v = Re(G^H f), ridge 1e-12.
    let mut gram = vec![0.0f64; n * n];
    let mut rhs = vec![0.0f64; n];
    for p in 0..n {
        for q in p..n {
            let mut acc = 0.0;
            for j in 0..nj {
                acc += (kernel[p * nj + j].conj() * kernel[q * nj + j]).re;
            }
            gram[p * n + q] = acc;
            gram[q * n + p] = acc;
        }
        gram[p * n + p] += 1e-12;
        let mut acc = 0.0;
        for j in 0..nj {
            acc += (kernel[p * nj + j].conj() * problem.data.f[j]).re;
        }
        rhs[p] = acc;
    }
    let mut v = rhs.clone();
    if cholesky_solve(&mut gram, &mut v, n).is_err() {
        // Should not happen with the ridge; fall back to zero intensities.
        v = vec![0.0; n];
    }
    for vm in v.iter_mut() {
        *vm = vm.clamp(0.0, problem.v_max);
    }

    let mut value = 0.0;
    for j in 0..nj {
        let mut fit = C64::new(0.0, 0.0);
        for (m, vm) in v.iter().enumerate() {
            fit += kernel[m * nj + j] * vm;
        }
        value += (problem.data.f[j] - fit).norm_sqr();
    }
    (value, v)
}

impl InclusionObjective for SubsurfaceProblem {
    fn best_fit(&self, zs: &[[f64; 3]]) -> (f64, Vec<f64>) {
        tilde_phi(zs, self)
    }
    fn v_max(&self) -> f64 {
        self.v_max
    }
}

/// Full inversion result.
#[derive(Debug, Clone)]
pub struct SubsurfaceInversion {
    pub recovered: InclusionSet,
    pub outcome: MinimizeOutcome,
    pub trace: Vec<TraceRow>,
}

/// Runs the hybrid search and returns the recovered inclusions sorted by
/// intensity, strongest first.
pub fn invert_subsurface(
    problem: &SubsurfaceProblem,
    params: &HsdParams,
    seed: u64,
) -> SubsurfaceInversion {
    let res = hsd_minimize(problem, &problem.boxdom, params, seed);
    let recovered = InclusionSet::new(
        res.positions
            .iter()
            .zip(&res.intensities)
            .map(|(z, v)| Inclusion { z: *z, v: *v })
            .collect(),
    )
    .sorted_by_intensity();
    SubsurfaceInversion { recovered, outcome: res.outcome, trace: res.trace }
}
