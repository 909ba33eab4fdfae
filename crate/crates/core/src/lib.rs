//! Numerical workbench for direct and inverse scattering problems governed by
//! the Helmholtz equation.
//!
//! The crate is organized around the pipeline used in obstacle and potential
//! scattering studies:
//!
//! * [`specfun`] — Bessel/Hankel functions, spherical harmonics, gamma.
//! * [`forward`] — synthetic data generators and analytic forward models
//!   (subsurface point inclusions, layered penetrable discs, fixed-energy
//!   phase shifts, exact circle amplitudes).
//! * [`optim`] — derivative-free minimization engines: Powell's method, the
//!   hybrid stochastic-deterministic search, multilevel single-linkage, and
//!   the iterative reduced random search with its stability index.
//! * [`inverse`] — problem-specific objectives and inversion drivers binding
//!   the forward models to the optimizers.
//! * [`mrc`] — direct obstacle scattering by random multi-point outgoing-wave
//!   expansions fitted on the boundary.
//! * [`sfm`] — support function method for convex obstacle localization.
//! * [`lsm`] — linear sampling indicators built on the far-field operator.
//!
//! All stochastic routines take explicit seeds and are bit-reproducible at a
//! fixed seed on a single thread.

pub mod error;
pub mod forward;
pub mod inverse;
pub mod io;
pub mod linalg;
pub mod lsm;
pub mod mrc;
pub mod optim;
pub mod sfm;
pub mod specfun;

pub use error::{Error, Result};

/// Complex scalar used across the crate.
pub type C64 = num_complex::Complex64;
