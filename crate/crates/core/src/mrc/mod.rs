//! Direct obstacle scattering by random multi-point outgoing-wave
//! expansions fitted on the boundary.

pub mod boundary;
pub mod solve;

pub use boundary::{make_boundary, BoundaryMesh, Shape};
pub use solve::{mrc_eval, mrc_far_field, mrc_solve, MrcParams, MrcSolution, MrcSource};

pub use crate::linalg::svd_min;
