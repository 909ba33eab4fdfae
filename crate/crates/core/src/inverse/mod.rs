//! Problem-specific objectives and inversion drivers.

pub mod layers;
pub mod potential;
pub mod subsurface;

pub use layers::{invert_layers, layers_objective, LayersInversion, MultiFreqTarget};
pub use potential::{
    invert_potential, potential_distance, potential_objective, PotentialInversion, PotentialTarget,
};
pub use subsurface::{invert_subsurface, tilde_phi, SubsurfaceInversion, SubsurfaceProblem};
