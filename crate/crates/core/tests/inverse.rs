//! Objective landscapes and desk-scale inversions.

mod common;

use scatter_core::forward::layered::{uniform_angles, RadialProfile};
use scatter_core::forward::phase_shifts::phase_shifts;
use scatter_core::forward::presets;
use scatter_core::forward::subsurface::subsurface_data;
use scatter_core::inverse::layers::{layers_objective, MultiFreqTarget};
use scatter_core::inverse::potential::{potential_objective, PotentialTarget};
use scatter_core::inverse::subsurface::{tilde_phi, SubsurfaceProblem};

/// Counts strict interior local minima of a sampled curve.
fn local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len() - 1)
        .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
        .collect()
}

#[test]
fn reduced_objective_cross_section_has_many_minima_with_global_near_true_inclusion() {
    // Slice through the 18-dimensional landscape: the first inclusion moves
    // along (r, 0, 0.520) while inclusions 3..6 stay at their true spots and
    // the second sits at a wrong position (-1, 0.3, 0.580).
    let phantom = presets::six_inclusion_phantom();
    let data = subsurface_data(&phantom, &presets::overhead_scan_pairs(), 0.0, 0).unwrap();
    let problem = SubsurfaceProblem::new(data, presets::subsurface_box(), 2.0).unwrap();

    let mut zs: Vec<[f64; 3]> = phantom.items.iter().map(|i| i.z).collect();
    zs[1] = [-1.0, 0.3, 0.580];
    let n = 401;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let r = -2.0 + 4.0 * i as f64 / (n - 1) as f64;
            zs[0] = [r, 0.0, 0.520];
            tilde_phi(&zs, &problem).0
        })
        .collect();
    let minima = local_minima(&values);
    assert!(minima.len() >= 4, "found only {} local minima", minima.len());
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let r_best = -2.0 + 4.0 * best as f64 / (n - 1) as f64;
    assert!(
        (1.45..=1.8).contains(&r_best),
        "global minimum of the slice at r = {r_best}"
    );
}

#[test]
fn layered_family_sweep_shows_sharp_multimodal_landscape() {
    // Observations of the t = 0.3 member; the sweep over t has several
    // local minima with the global one at the truth.
    let truth = presets::layered_qt_profile(0.3);
    let target = MultiFreqTarget::from_profile(
        &truth,
        &presets::LAYERED_FREQUENCIES,
        1.0,
        &uniform_angles(64),
    )
    .unwrap();
    let n = 101;
    let ts: Vec<f64> = (0..n).map(|i| 0.1 + 0.5 * i as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = ts
        .iter()
        .map(|&t| layers_objective(&presets::layered_qt_profile(t), &target).unwrap())
        .collect();
    let minima = local_minima(&values);
    assert!(minima.len() >= 2, "landscape unexpectedly smooth: {minima:?}");
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert!((ts[best] - 0.3).abs() < 0.01, "global at t = {}", ts[best]);
    assert!(values[best] < 1e-12);
}

#[test]
fn perturbed_q3_objective_matches_end_to_end_recomputation() {
    let q3 = presets::well_q3();
    let target = PotentialTarget::from_profile(&q3, 1.0, 31, 0.0, 0).unwrap();
    let perturbed = RadialProfile::new(vec![7.9], vec![-10.0], 10.0).unwrap();
    let v = potential_objective(&perturbed, &target).unwrap();
    // Recompute through the raw pieces.
    let d_target = phase_shifts(&q3, 1.0, 31).unwrap();
    let d_probe = phase_shifts(&perturbed, 1.0, 31).unwrap();
    let num: f64 = (1..=31)
        .map(|l| (d_probe.shifts[l] - d_target.shifts[l]).powi(2))
        .sum();
    let den: f64 = (1..=31).map(|l| d_target.shifts[l].powi(2)).sum();
    assert!((v - num / den).abs() < 1e-15);
    assert!(v > 1e-6, "perturbation must be visible, got {v}");
}

#[test]
fn side_scan_geometry_recovers_strong_inclusions_with_depth_ambiguity() {
    // Sources and detectors all to one side of the box: the data still pin
    // the lateral positions of the strong inclusions, while depths and
    // intensities trade off against each other.
    let phantom = presets::six_inclusion_phantom();
    let data = subsurface_data(&phantom, &presets::side_scan_pairs(), 0.0, 0).unwrap();
    let problem = SubsurfaceProblem::new(data, presets::subsurface_box(), 2.0).unwrap();
    let params = scatter_core::optim::HsdParams {
        powell: scatter_core::optim::PowellParams {
            tol: 1e-12,
            max_sweeps: 400,
            initial_step: 0.1,
        },
        ..Default::default()
    };
    let mut best: Option<scatter_core::inverse::subsurface::SubsurfaceInversion> = None;
    for seed in [14u64, 9, 12] {
        let inv = scatter_core::inverse::subsurface::invert_subsurface(&problem, &params, seed);
        let better = best
            .as_ref()
            .map_or(true, |b| inv.outcome.best_value < b.outcome.best_value);
        if better {
            best = Some(inv);
        }
        if best.as_ref().unwrap().outcome.best_value < 1e-5 {
            break;
        }
    }
    let inv = best.unwrap();
    assert!(inv.outcome.best_value < 1e-4, "misfit {}", inv.outcome.best_value);
    assert!(inv.recovered.len() >= 4, "found only {}", inv.recovered.len());
    // Lateral localization of the three strongest/shallowest inclusions.
    for t in [[1.640, -0.510], [1.220, 0.570], [-0.220, 0.470]] {
        let hit = inv.recovered.items.iter().any(|r| {
            (r.z[0] - t[0]).abs() < 0.25 && (r.z[1] - t[1]).abs() < 0.25
        });
        assert!(hit, "no recovered inclusion near (x1, x2) = {t:?}");
    }
}

#[test]
fn single_layer_search_collapses_to_a_point_quickly() {
    // With the layer bound at 1 the retained set polishes onto one point
    // and the index effectively vanishes within the first iterations.
    let q2 = presets::well_q2();
    let target = PotentialTarget::from_profile(&q2, 2.0, 31, 0.0, 0).unwrap();
    let domain = presets::potential_domain(1);
    let params = scatter_core::optim::IrrsParams {
        batch: 1000,
        ..Default::default()
    };
    let inv = scatter_core::inverse::potential::invert_potential(&target, &domain, &params, 11)
        .unwrap();
    assert!(inv.stable);
    assert!(inv.outcome.iterations <= 3, "took {} iterations", inv.outcome.iterations);
    let index = inv.outcome.stability_index.unwrap();
    assert!(index <= 1e-3, "index {index}");
    assert!((inv.recovered.breakpoints[0] - 8.0).abs() < 1e-3);
    assert!((inv.recovered.values[0] - (-4.0)).abs() < 1e-3);
}
