//! Inversion of fixed-energy phase shifts for piecewise-constant radial
//! potentials: the relative misfit objective, the L2(R^3) distance between
//! profiles, and the reduced-random-search driver with its stability
//! verdict.

use crate::error::{Error, Result};
use crate::forward::layered::RadialProfile;
use crate::forward::phase_shifts::{noisy_shifts, phase_shifts, PhaseShiftSet};
use crate::optim::{
    irrs_minimize, BoxDomain, IrrsParams, MinimizeOutcome, Objective, StopReason, TraceRow,
};

/// Target data: shifts delta~(k, l) for l = 0..=n_shifts, of which
/// l = 1..=n_shifts enter the misfit.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTarget {
    pub k: f64,
    pub shifts: PhaseShiftSet,
    pub n_shifts: usize,
}

impl PotentialTarget {
    pub fn new(shifts: PhaseShiftSet, n_shifts: usize) -> Result<Self> {
        if n_shifts < 1 {
            return Err(Error::invalid("need at least one shift in the misfit"));
        }
        if shifts.shifts.len() <= n_shifts {
            return Err(Error::invalid(format!(
                "target provides {} shifts, need l = 0..={n_shifts}",
                shifts.shifts.len()
            )));
        }
        let denom: f64 = shifts.shifts[1..=n_shifts].iter().map(|d| d * d).sum();
        if denom <= 0.0 {
            return Err(Error::invalid("target shifts vanish identically for l >= 1"));
        }
        Ok(PotentialTarget { k: shifts.k, shifts, n_shifts })
    }

    /// Synthesizes a target from a known potential, optionally noisy.
    pub fn from_profile(
        profile: &RadialProfile,
        k: f64,
        n_shifts: usize,
        noise_h: f64,
        seed: u64,
    ) -> Result<Self> {
        let clean = phase_shifts(profile, k, n_shifts)?;
        let data = if noise_h > 0.0 { noisy_shifts(&clean, noise_h, seed) } else { clean };
        PotentialTarget::new(data, n_shifts)
    }

    fn denom(&self) -> f64 {
        self.shifts.shifts[1..=self.n_shifts].iter().map(|d| d * d).sum()
    }
}

/// Relative misfit sum_{l=1..N} |delta - delta~|^2 / sum_{l=1..N} |delta~|^2.
pub fn potential_objective(profile: &RadialProfile, target: &PotentialTarget) -> Result<f64> {
    let computed = phase_shifts(profile, target.k, target.n_shifts)?;
    let mut num = 0.0;
    for l in 1..=target.n_shifts {
        let d = computed.shifts[l] - target.shifts.shifts[l];
        num += d * d;
    }
    Ok(num / target.denom())
}

/// L2(R^3) distance between two radial profiles (zero background outside
/// their breakpoints), evaluated exactly on the merged partition.
pub fn potential_distance(p1: &RadialProfile, p2: &RadialProfile) -> f64 {
    let mut cuts: Vec<f64> = Vec::new();
    cuts.extend(&p1.breakpoints);
    cuts.extend(&p2.breakpoints);
    cuts.push(0.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let d = p1.value_at(mid, 0.0) - p2.value_at(mid, 0.0);
        acc += d * d * (b.powi(3) - a.powi(3)) / 3.0;
    }
    (4.0 * std::f64::consts::PI * acc).sqrt()
}

/// Inversion result with the stability verdict.
#[derive(Debug, Clone)]
pub struct PotentialInversion {
    pub recovered: RadialProfile,
    pub outcome: MinimizeOutcome,
    /// True when the run stopped with the index below its threshold.
    pub stable: bool,
    pub trace: Vec<TraceRow>,
}

/// Runs the reduced random search over (r_1..r_m, q_1..q_m) layouts with the
/// diameter-normalized potential distance as the stability metric.
pub fn invert_potential(
    target: &PotentialTarget,
    domain: &BoxDomain,
    params: &IrrsParams,
    seed: u64,
) -> Result<PotentialInversion> {
    let m = domain.sorted_radii;
    if m == 0 || domain.dim() != 2 * m {
        return Err(Error::invalid(
            "potential domain must use the sorted-radius layout (r.., q..)",
        ));
    }
    let radius = domain.upper[0];
    let q_lo = domain.lower[m];
    let q_hi = domain.upper[m];
    // Normalization: the L2 diameter of the admissible set, i.e. the
    // distance between the two constant extremes.
    let diam = potential_distance(
        &RadialProfile::single(radius, q_lo, radius),
        &RadialProfile::single(radius, q_hi, radius),
    );
    let metric = move |a: &[f64], b: &[f64]| {
        let pa = RadialProfile::from_point(a, radius);
        let pb = RadialProfile::from_point(b, radius);
        potential_distance(&pa, &pb) / diam
    };
    let obj = Objective::new(2 * m, |x: &[f64]| {
        let p = RadialProfile::from_point(x, radius);
        potential_objective(&p, target).unwrap_or(f64::INFINITY)
    });
    let res = irrs_minimize(&obj, domain, &metric, params, seed);
    let stable = res.outcome.stopped_by == StopReason::Stability;
    let recovered =
        RadialProfile::from_point(&res.outcome.best_point, radius).simplified(1e-6, 0.0);
    Ok(PotentialInversion { recovered, outcome: res.outcome, stable, trace: res.trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::presets;

    #[test]
    fn objective_vanishes_at_the_generator() {
        let q3 = presets::well_q3();
        let target = PotentialTarget::from_profile(&q3, 1.0, 31, 0.0, 0).unwrap();
        let v = potential_objective(&q3, &target).unwrap();
        assert!(v < 1e-24, "v = {v}");
    }

    #[test]
    fn free_profile_against_any_target_gives_one() {
        let q3 = presets::well_q3();
        let target = PotentialTarget::from_profile(&q3, 1.0, 31, 0.0, 0).unwrap();
        let free = RadialProfile::new(vec![], vec![], 10.0).unwrap();
        let v = potential_objective(&free, &target).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn objective_is_scale_free_in_the_data() {
        let q3 = presets::well_q3();
        let probe = RadialProfile::new(vec![7.9], vec![-10.0], 10.0).unwrap();
        let t1 = PotentialTarget::from_profile(&q3, 2.0, 20, 0.0, 0).unwrap();
        let mut scaled = t1.clone();
        for d in scaled.shifts.shifts.iter_mut() {
            *d *= 3.5;
        }
        let v1 = potential_objective(&probe, &t1).unwrap();
        // Scaling data rescales both terms of the quotient only through the
        // numerator's cross terms; verify the exact ratio structure instead:
        // multiply computed and target by the same constant.
        let num_direct: f64 = {
            let computed = phase_shifts(&probe, 2.0, 20).unwrap();
            (1..=20)
                .map(|l| (3.5 * computed.shifts[l] - scaled.shifts.shifts[l]).powi(2))
                .sum()
        };
        let den_direct: f64 = scaled.shifts.shifts[1..=20].iter().map(|d| d * d).sum();
        assert!(((num_direct / den_direct) - v1).abs() < 1e-12);
    }

    #[test]
    fn distance_closed_form_and_metric_axioms() {
        let p1 = RadialProfile::new(vec![1.0], vec![-1.0], 1.0).unwrap();
        let zero = RadialProfile::new(vec![], vec![], 1.0).unwrap();
        let d = potential_distance(&p1, &zero);
        let expect = (4.0 * std::f64::consts::PI / 3.0).sqrt();
        assert!((d - expect).abs() < 1e-14);
        assert_eq!(potential_distance(&p1, &p1), 0.0);

        // Symmetry + triangle inequality on a few fixed triples.
        let a = RadialProfile::new(vec![0.5, 1.0], vec![-2.0, 1.0], 1.0).unwrap();
        let b = RadialProfile::new(vec![0.7], vec![-1.5], 1.0).unwrap();
        let c = RadialProfile::new(vec![0.2, 0.9], vec![0.5, -0.5], 1.0).unwrap();
        let dab = potential_distance(&a, &b);
        let dba = potential_distance(&b, &a);
        assert!((dab - dba).abs() < 1e-14);
        assert!(potential_distance(&a, &c) <= dab + potential_distance(&b, &c) + 1e-14);
    }

    #[test]
    fn degenerate_target_rejected() {
        let free = RadialProfile::new(vec![], vec![], 10.0).unwrap();
        assert!(PotentialTarget::from_profile(&free, 1.0, 31, 0.0, 0).is_err());
    }
}
