//! Benchmarks of the numerical kernels that dominate the workbench: radial
//! special functions, the layered-disc mode solve, the phase-shift objective,
//! the clamped subsurface fit, and one boundary-fitting iteration's least
//! squares.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scatter_core::forward::layered::{layered_circle_field, uniform_angles};
use scatter_core::forward::phase_shifts::phase_shifts;
use scatter_core::forward::presets;
use scatter_core::forward::subsurface::subsurface_data;
use scatter_core::inverse::potential::{potential_objective, PotentialTarget};
use scatter_core::inverse::subsurface::{tilde_phi, SubsurfaceProblem};
use scatter_core::linalg::{svd_min, CMat};
use scatter_core::specfun::{bessel_j_array, bessel_y_array};
use scatter_core::C64;

fn bench_bessel(c: &mut Criterion) {
    c.bench_function("bessel_jy_arrays_l40_x25", |b| {
        b.iter(|| {
            let j = bessel_j_array(40, 25.0).unwrap();
            let y = bessel_y_array(40, 25.0).unwrap();
            std::hint::black_box((j[40], y[40]))
        })
    });
}

fn bench_layered(c: &mut Criterion) {
    let profile = presets::layered_qt_profile(0.3);
    let angles = uniform_angles(64);
    c.bench_function("layered_field_k10_64_angles", |b| {
        b.iter(|| std::hint::black_box(layered_circle_field(&profile, 10.0, 1.0, &angles).unwrap()))
    });
}

fn bench_phase_objective(c: &mut Criterion) {
    let target = PotentialTarget::from_profile(&presets::well_q3(), 2.5, 31, 0.0, 0).unwrap();
    let probe = scatter_core::forward::layered::RadialProfile::new(
        vec![5.0, 8.1],
        vec![-9.0, -4.0],
        10.0,
    )
    .unwrap();
    c.bench_function("potential_objective_31_shifts", |b| {
        b.iter(|| std::hint::black_box(potential_objective(&probe, &target).unwrap()))
    });
    c.bench_function("phase_shifts_q3_l31", |b| {
        b.iter(|| std::hint::black_box(phase_shifts(&presets::well_q3(), 2.5, 31).unwrap()))
    });
}

fn bench_tilde_phi(c: &mut Criterion) {
    let data = subsurface_data(
        &presets::six_inclusion_phantom(),
        &presets::overhead_scan_pairs(),
        0.0,
        0,
    )
    .unwrap();
    let problem = SubsurfaceProblem::new(data, presets::subsurface_box(), 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("tilde_phi_16_points_252_pairs", |b| {
        b.iter_batched(
            || {
                (0..16)
                    .map(|_| {
                        [
                            rng.gen_range(-2.0..2.0),
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(0.0..1.0),
                        ]
                    })
                    .collect::<Vec<[f64; 3]>>()
            },
            |zs| std::hint::black_box(tilde_phi(&zs, &problem)),
            BatchSize::SmallInput,
        )
    });
}

fn bench_svd_min(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let design = CMat::from_fn(720, 33, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let b: Vec<C64> = (0..720)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    c.bench_function("svd_min_720x33", |bch| {
        bch.iter(|| std::hint::black_box(svd_min(&design, &b, 1e-12)))
    });
}

criterion_group!(
    kernels,
    bench_bessel,
    bench_layered,
    bench_phase_objective,
    bench_tilde_phi,
    bench_svd_min
);
criterion_main!(kernels);
