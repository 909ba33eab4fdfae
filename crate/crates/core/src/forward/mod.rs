//! Synthetic-data generators and analytic forward models.

pub mod amplitude;
pub mod layered;
pub mod phase_shifts;
pub mod presets;
pub mod subsurface;

pub use amplitude::{circle_amplitude, AmplitudeSource, BoundaryCondition, CircleScatterer};
pub use layered::{layered_circle_field, scattering_coefficients, LayeredFieldSamples, RadialProfile};
pub use phase_shifts::{noisy_shifts, phase_shifts, PhaseShiftSet};
pub use subsurface::{
    greens, subsurface_data, Inclusion, InclusionSet, Pair, SourceDetectorPairs, SubsurfaceData,
};
