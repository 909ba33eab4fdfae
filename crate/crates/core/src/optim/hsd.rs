//! Hybrid stochastic-deterministic search for point-inclusion
//! configurations: random completion of a configuration, elimination of weak
//! points, merging of near-duplicates, and a Powell polish of the surviving
//! positions, iterated with recycling of the survivors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::optim::{
    powell_minimize, BoxDomain, MinimizeOutcome, Objective, PowellParams, StopReason, TraceRow,
};

/// Problem callback: best-fit intensities (clamped to [0, v_max]) for a set
/// of trial positions and the objective value at that fit.
pub trait InclusionObjective: Sync {
    fn best_fit(&self, zs: &[[f64; 3]]) -> (f64, Vec<f64>);
    fn v_max(&self) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsdParams {
    /// Configuration size (upper bound on the number of inclusions).
    pub m: usize,
    /// Initial acceptance scale P0.
    pub p0: f64,
    /// Random-try budget per repetition.
    pub t_max: usize,
    /// Number of outer repetitions.
    pub n_max: usize,
    /// Acceptance factor: a random completion proceeds when its value is
    /// below P0 * eps_s.
    pub eps_s: f64,
    /// Weak-point threshold as a fraction of v_max.
    pub eps_i: f64,
    /// Merge radius as a fraction of the box diameter.
    pub eps_d: f64,
    /// Success threshold on the objective.
    pub eps: f64,
    pub powell: PowellParams,
}

impl Default for HsdParams {
    fn default() -> Self {
        HsdParams {
            m: 16,
            p0: 1.0,
            t_max: 1000,
            n_max: 6,
            eps_s: 0.5,
            eps_i: 0.25,
            eps_d: 0.1,
            eps: 1e-5,
            powell: PowellParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HsdResult {
    pub outcome: MinimizeOutcome,
    pub positions: Vec<[f64; 3]>,
    pub intensities: Vec<f64>,
    pub trace: Vec<TraceRow>,
}

fn merge_close(points: &mut Vec<[f64; 3]>, intens: &mut Vec<f64>, radius: f64) {
    // Closest pair first, combining into an intensity-weighted position,
    // until no pair is within the merge radius.
    loop {
        let n = points.len();
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist(&points[i], &points[j]);
                if d < radius && best.map_or(true, |b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let (keep, drop) = if intens[i] >= intens[j] { (i, j) } else { (j, i) };
                let total = intens[keep] + intens[drop];
                if total > 0.0 {
                    let w = intens[drop] / total;
                    for c in 0..3 {
                        points[keep][c] += w * (points[drop][c] - points[keep][c]);
                    }
                }
                intens[keep] = total;
                points.swap_remove(drop);
                intens.swap_remove(drop);
            }
            None => break,
        }
    }
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn flatten(zs: &[[f64; 3]]) -> Vec<f64> {
    zs.iter().flat_map(|z| z.iter().copied()).collect()
}

fn unflatten(x: &[f64]) -> Vec<[f64; 3]> {
    x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

/// Runs the full search. `zbox` is the 3D box containing the inclusions.
pub fn hsd_minimize(
    problem: &dyn InclusionObjective,
    zbox: &BoxDomain,
    params: &HsdParams,
    seed: u64,
) -> HsdResult {
    assert_eq!(zbox.dim(), 3, "inclusion search needs a 3D box");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let merge_radius = params.eps_d * zbox.diameter();
    let v_floor = problem.v_max() * params.eps_i;

    let mut best_value = f64::INFINITY;
    let mut best_positions: Vec<[f64; 3]> = Vec::new();
    let mut best_intens: Vec<f64> = Vec::new();
    let mut trace = Vec::new();
    let mut total_tries = 0usize;
    let mut total_evals = 0u64;
    let mut searches = 0usize;
    let mut succeeded = false;

    'repetitions: for _rep in 0..params.n_max {
        let mut survivors: Vec<[f64; 3]> = Vec::new();
        let mut p0 = params.p0;
        let mut tries = 0usize;
        loop {
            // Step 1: complete the configuration randomly and screen it.
            let mut config = survivors.clone();
            while config.len() < params.m {
                let s = zbox.sample(&mut rng);
                config.push([s[0], s[1], s[2]]);
            }
            tries += 1;
            total_tries += 1;
            let (ps, intens) = problem.best_fit(&config);
            total_evals += 1;
            if ps < best_value {
                best_value = ps;
                best_positions = config.clone();
                best_intens = intens.clone();
            }
            if ps >= p0 * params.eps_s {
                if tries >= params.t_max {
                    break;
                }
                continue;
            }

            // Step 2: eliminate weak points.
            let mut pts: Vec<[f64; 3]> = Vec::new();
            let mut vs: Vec<f64> = Vec::new();
            for (z, v) in config.iter().zip(&intens) {
                if *v >= v_floor {
                    pts.push(*z);
                    vs.push(*v);
                }
            }
            // Step 3: merge near-duplicates until stable.
            merge_close(&mut pts, &mut vs, merge_radius);
            if pts.is_empty() {
                if tries >= params.t_max {
                    break;
                }
                continue;
            }

            // Step 4: deterministic polish with interleaved reduction.
            // After each Powell run the intensities are refit; points that
            // fell below the weak threshold are dropped and near-duplicates
            // merged, and the minimization restarts in the smaller space
            // (with fresh direction sets) until nothing reduces.
            let mut polished = pts;
            let mut p = f64::INFINITY;
            let mut fitted = Vec::new();
            for _cycle in 0..8 {
                let n = polished.len();
                let domain = zbox.tile(n);
                let obj = Objective::new(3 * n, |x: &[f64]| problem.best_fit(&unflatten(x)).0);
                let out = powell_minimize(&obj, &flatten(&polished), &domain, &params.powell);
                searches += 1;
                total_evals += out.evals;
                let prev = p;
                polished = unflatten(&out.best_point);
                let refit = problem.best_fit(&polished);
                total_evals += 1;
                p = refit.0;
                fitted = refit.1;
                if p < params.eps {
                    break;
                }
                let mut kept: Vec<[f64; 3]> = Vec::new();
                let mut kept_v: Vec<f64> = Vec::new();
                for (z, v) in polished.iter().zip(&fitted) {
                    if *v >= v_floor {
                        kept.push(*z);
                        kept_v.push(*v);
                    }
                }
                merge_close(&mut kept, &mut kept_v, merge_radius);
                let reduced = !kept.is_empty() && kept.len() < polished.len();
                if reduced {
                    polished = kept;
                } else if p > 0.9 * prev {
                    // Neither a reduction nor real progress: a restart with
                    // fresh direction sets will not dig deeper.
                    break;
                }
            }
            if p < best_value {
                best_value = p;
                best_positions = polished.clone();
                best_intens = fitted.clone();
            }
            trace.push(TraceRow {
                iteration: total_tries,
                best_value,
                stability_index: None,
                searches,
                minima: polished.len(),
            });
            if p < params.eps {
                succeeded = true;
                break 'repetitions;
            }
            // Step 5: recycle the polished survivors.
            p0 = p;
            survivors = polished;
            if tries >= params.t_max {
                break;
            }
        }
    }

    // Report only the carrying points of the best configuration.
    let mut positions = Vec::new();
    let mut intensities = Vec::new();
    for (z, v) in best_positions.iter().zip(&best_intens) {
        if *v > 1e-12 {
            positions.push(*z);
            intensities.push(*v);
        }
    }
    HsdResult {
        outcome: MinimizeOutcome {
            best_point: flatten(&positions),
            best_value,
            stability_index: None,
            iterations: total_tries,
            evals: total_evals,
            seed,
            stopped_by: if succeeded { StopReason::Tolerance } else { StopReason::Budget },
        },
        positions,
        intensities,
        trace,
    }
}
