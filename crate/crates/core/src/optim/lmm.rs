//! Local minimization with layer reduction for piecewise-constant profile
//! layouts (r_1..r_m, c_1..c_m): thin layers are deleted and equal-valued
//! neighbors merged before and after a Powell run in the reduced space.

use crate::optim::{powell_minimize, BoxDomain, MinimizeOutcome, Objective, PowellParams};

#[derive(Debug, Clone, PartialEq)]
pub struct LmmParams {
    /// Minimum relative layer width (fraction of the radius span); thinner
    /// layers are deleted.
    pub eps_r: f64,
    /// Layers whose values differ by less than this are merged.
    pub eps_n: f64,
    pub powell: PowellParams,
}

impl Default for LmmParams {
    fn default() -> Self {
        LmmParams { eps_r: 0.01, eps_n: 1e-3, powell: PowellParams::default() }
    }
}

/// One reduction pass over (radii, values) pairs. Returns the reduced pairs.
fn reduce(pairs: &[(f64, f64)], radius_span: f64, eps_r: f64, eps_n: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut lo = 0.0f64;
    for &(r, c) in pairs {
        let width = r - lo;
        if width < eps_r * radius_span {
            // Thin layer: its span is absorbed by the next layer outward.
            continue;
        }
        let mergeable = matches!(out.last(), Some((_, pc)) if (pc - c).abs() < eps_n);
        if mergeable {
            // Merge equal-valued neighbors, width-averaging the value.
            let prev_lo = if out.len() >= 2 { out[out.len() - 2].0 } else { 0.0 };
            let last = out.last_mut().unwrap();
            let w_prev = last.0 - prev_lo;
            last.1 = (last.1 * w_prev + c * width) / (w_prev + width);
            last.0 = r;
        } else {
            out.push((r, c));
        }
        lo = r;
    }
    out
}

fn pairs_of(point: &[f64]) -> Vec<(f64, f64)> {
    let m = point.len() / 2;
    let mut pairs: Vec<(f64, f64)> = (0..m).map(|i| (point[i], point[m + i])).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs
}

fn point_of(pairs: &[(f64, f64)]) -> Vec<f64> {
    let mut p: Vec<f64> = pairs.iter().map(|x| x.0).collect();
    p.extend(pairs.iter().map(|x| x.1));
    p
}

/// Reduced box for m layers, bounds taken from the first radius/value
/// coordinate of the full domain.
fn reduced_domain(domain: &BoxDomain, m_full: usize, m: usize) -> BoxDomain {
    let r_lo = domain.lower[0];
    let r_hi = domain.upper[0];
    let c_lo = domain.lower[m_full];
    let c_hi = domain.upper[m_full];
    BoxDomain::with_sorted_radii(
        std::iter::repeat(r_lo).take(m).chain(std::iter::repeat(c_lo).take(m)).collect(),
        std::iter::repeat(r_hi).take(m).chain(std::iter::repeat(c_hi).take(m)).collect(),
        m,
    )
    .unwrap()
}

/// Reduction, Powell in the reduced space, final reduction.
///
/// The objective must accept a (r.., c..) layout of any layer count m >= 1
/// (`obj_for(m)` builds the handle). Returns the reduced minimizer; its
/// dimension may be smaller than the start's.
pub fn lmm_local<'a>(
    obj_for: &dyn Fn(usize) -> Objective<'a>,
    start: &[f64],
    domain: &BoxDomain,
    params: &LmmParams,
) -> MinimizeOutcome {
    let m_full = domain.sorted_radii.max(start.len() / 2);
    let radius_span = domain.upper[0] - domain.lower[0];

    let mut pairs = reduce(&pairs_of(start), radius_span, params.eps_r, params.eps_n);
    if pairs.is_empty() {
        // Everything reduced away; fall back to the raw start.
        pairs = pairs_of(start);
    }
    let m = pairs.len();
    let obj = obj_for(m);
    let dom = reduced_domain(domain, m_full, m);
    let mut out = powell_minimize(&obj, &point_of(&pairs), &dom, &params.powell);

    let final_pairs = reduce(
        &pairs_of(&out.best_point),
        radius_span,
        params.eps_r,
        params.eps_n,
    );
    if !final_pairs.is_empty() && final_pairs.len() < m {
        let obj2 = obj_for(final_pairs.len());
        let reduced_point = point_of(&final_pairs);
        let v = obj2.value(&reduced_point);
        out.evals += 1;
        // Keep the reduced form only when it does not degrade the fit.
        if v <= out.best_value * (1.0 + 1e-12) + 1e-300 {
            out.best_point = reduced_point;
            out.best_value = v;
        }
    }
    out
}
