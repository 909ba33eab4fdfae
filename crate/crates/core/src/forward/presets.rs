//! Benchmark configurations used by the regression suite and the CLI: the
//! six-inclusion subsurface phantom with its two source/detector layouts,
//! the reference square-well potentials, and the three-layer disc family.

use crate::forward::layered::RadialProfile;
use crate::forward::subsurface::{Inclusion, InclusionSet, SourceDetectorPairs};
use crate::optim::BoxDomain;

/// Wavenumber of the subsurface benchmark.
pub const SUBSURFACE_K: f64 = 5.0;

/// Intensity bound of the subsurface benchmark.
pub const SUBSURFACE_V_MAX: f64 = 2.0;

/// Search box {-2 < x1 < 2, -1 < x2 < 1, 0 < x3 < 1} of the subsurface
/// benchmark.
pub fn subsurface_box() -> BoxDomain {
    BoxDomain::new(vec![-2.0, -1.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap()
}

/// The six-inclusion phantom searched for in both subsurface layouts.
pub fn six_inclusion_phantom() -> InclusionSet {
    InclusionSet::new(vec![
        Inclusion { z: [1.640, -0.510, 0.520], v: 1.200 },
        Inclusion { z: [-1.430, -0.500, 0.580], v: 0.500 },
        Inclusion { z: [1.220, 0.570, 0.370], v: 0.700 },
        Inclusion { z: [1.410, 0.230, 0.740], v: 0.610 },
        Inclusion { z: [-0.220, 0.470, 0.270], v: 0.700 },
        Inclusion { z: [-1.410, 0.230, 0.174], v: 0.600 },
    ])
}

/// Layout with 12 sources on two lines and 21 detectors on three lines,
/// all directly above the search area (a mammography-style scan).
pub fn overhead_scan_pairs() -> SourceDetectorPairs {
    let mut sources = Vec::new();
    for j in 0..2 {
        for i in 0..6 {
            sources.push([-1.667 + 0.667 * i as f64, -0.5 + 1.0 * j as f64, 0.0]);
        }
    }
    let mut detectors = Vec::new();
    for j in 0..3 {
        for i in 0..7 {
            detectors.push([-2.0 + 0.667 * i as f64, -1.0 + 1.0 * j as f64, 0.0]);
        }
    }
    SourceDetectorPairs::from_grids(&sources, &detectors, SUBSURFACE_K).unwrap()
}

/// Layout with 8 sources on one line and 22 detectors on two lines, all to
/// one side of the search area (a mine-search scan).
pub fn side_scan_pairs() -> SourceDetectorPairs {
    let mut sources = Vec::new();
    for i in 0..8 {
        sources.push([-1.75 + 0.5 * i as f64, 1.5, 0.0]);
    }
    let mut detectors = Vec::new();
    for j in 0..2 {
        for i in 0..11 {
            detectors.push([-2.0 + 0.4 * i as f64, 1.0 + 1.0 * j as f64, 0.0]);
        }
    }
    SourceDetectorPairs::from_grids(&sources, &detectors, SUBSURFACE_K).unwrap()
}

/// Shallow square well q1 = -2/3 on [0, 8), support radius 10.
pub fn well_q1() -> RadialProfile {
    RadialProfile::new(vec![8.0], vec![-2.0 / 3.0], 10.0).unwrap()
}

/// Intermediate square well q2 = -4 on [0, 8).
pub fn well_q2() -> RadialProfile {
    RadialProfile::new(vec![8.0], vec![-4.0], 10.0).unwrap()
}

/// Deep square well q3 = -10 on [0, 8).
pub fn well_q3() -> RadialProfile {
    RadialProfile::new(vec![8.0], vec![-10.0], 10.0).unwrap()
}

/// Admissible set of the potential benchmark: M layers, radii in [0, 10],
/// values in [-20, 0], layout (r.., q..).
pub fn potential_domain(m: usize) -> BoxDomain {
    BoxDomain::with_sorted_radii(
        vec![0.0; m].into_iter().chain(vec![-20.0; m]).collect(),
        vec![10.0; m].into_iter().chain(vec![0.0; m]).collect(),
        m,
    )
    .unwrap()
}

/// Number of shifts forming the data of the potential benchmark.
pub const POTENTIAL_N_SHIFTS: usize = 31;

/// Three-layer disc family q_t: 0.49 inside radius t, 9.0 up to 0.6, free
/// space beyond; measurement circle at radius 1.
pub fn layered_qt_profile(t: f64) -> RadialProfile {
    RadialProfile::new(vec![t, 0.6, 1.0], vec![0.49, 9.0, 1.0], 1.0).unwrap()
}

/// The multi-frequency probe set used with the layered family.
pub const LAYERED_FREQUENCIES: [f64; 3] = [3.0, 6.5, 10.0];
