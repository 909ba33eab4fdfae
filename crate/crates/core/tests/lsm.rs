//! Sampling-indicator localization on analytic circle data (small grids;
//! the full benchmark configuration runs in the acceptance suite).

mod common;

use scatter_core::forward::amplitude::{BoundaryCondition, CircleScatterer};
use scatter_core::lsm::{build_far_matrix, lsm_scan, GridSpec, LsmVariant};

#[test]
fn indicator_minimum_localizes_a_small_circle() {
    let sc = CircleScatterer::new(1.0, [3.0, 4.0], 2.0, BoundaryCondition::Dirichlet).unwrap();
    let m = build_far_matrix(&sc, 32).unwrap();
    let spec = GridSpec { x0: 0.0, x1: 8.0, y0: 0.0, y1: 8.0, nx: 33, ny: 33 };
    for variant in [LsmVariant::ColtonKress, LsmVariant::Kirsch] {
        let grid = lsm_scan(&m, &spec, variant).unwrap();
        let z = grid.argmin();
        let dist = ((z[0] - 3.0).powi(2) + (z[1] - 4.0).powi(2)).sqrt();
        assert!(dist <= 1.0, "{variant:?}: argmin {z:?} misses the disc by {dist}");
        // Inside-vs-outside contrast at matched distances from the grid.
        let inside = grid
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (iy, ix) = (i / 33, i % 33);
                let (x, y) = (spec.x(ix), spec.y(iy));
                ((x - 3.0).powi(2) + (y - 4.0).powi(2)).sqrt() < 0.8
            })
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        let far = grid
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (iy, ix) = (i / 33, i % 33);
                let (x, y) = (spec.x(ix), spec.y(iy));
                ((x - 3.0).powi(2) + (y - 4.0).powi(2)).sqrt() > 3.0
            })
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        assert!(inside < far, "{variant:?}: no interior contrast");
    }
}

#[test]
fn noise_degrades_but_keeps_coarse_localization() {
    use rand::{Rng, SeedableRng};
    let sc = CircleScatterer::new(1.0, [3.0, 4.0], 2.0, BoundaryCondition::Dirichlet).unwrap();
    let mut m = build_far_matrix(&sc, 32).unwrap();
    // 1% relative multiplicative noise on the matrix entries.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let scale = m.entries.frobenius_norm() / 32.0;
    let noisy = scatter_core::linalg::CMat::from_fn(32, 32, |i, j| {
        let eps = scatter_core::C64::new(rng.gen_range(-0.01..0.01), rng.gen_range(-0.01..0.01));
        m.entries.get(i, j) + eps * scale
    });
    m.entries = noisy;
    let spec = GridSpec { x0: 0.0, x1: 8.0, y0: 0.0, y1: 8.0, nx: 33, ny: 33 };
    let grid = lsm_scan(&m, &spec, LsmVariant::ColtonKress).unwrap();
    let z = grid.argmin();
    let dist = ((z[0] - 3.0).powi(2) + (z[1] - 4.0).powi(2)).sqrt();
    // Argmin stays within the disc dilated by one radius.
    assert!(dist <= 2.0, "argmin {z:?} displaced by {dist}");
}
