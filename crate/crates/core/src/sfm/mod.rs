//! Support function method for convex obstacle localization from far-field
//! data.

pub mod kirchhoff;
pub mod reconstruct;
pub mod support;

pub use kirchhoff::{kirchhoff_amplitude, CircleBoundary, ConvexBoundary};
pub use reconstruct::{convex_hull_halfplanes, reconstruct_boundary};
pub use support::{
    support_from_amplitude, support_robin, support_samples, RobinSupport, SupportParams,
    SupportSamples,
};
