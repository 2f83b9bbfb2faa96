//! Numerical laboratory for the radially symmetric compressible
//! Navier-Stokes system written in its `(a, v)` form, where `a = rho - 1`
//! is the density perturbation and `v = |D|^{-1} div u`.
//!
//! The crate is organised bottom-up:
//!
//! * [`radial`]: paired physical/spectral grids for 3D radial fields, the
//!   weighted discrete sine transform, multipliers and norms.
//! * [`semigroup`]: the per-frequency 2x2 propagator `exp(tM)`, its
//!   eigenvalues, band-limited kernel norms and the anisotropic kernel probe.
//! * [`besov`]: Littlewood-Paley blocks and homogeneous Besov norms.
//! * [`solver`]: ETD2 time stepping of the full nonlinear system.
//! * [`decay`]: log-log exponent fits and experiment drivers.
//! * [`cli`]: configuration parsing, dispatch and CSV/JSON emission.

pub mod besov;
pub mod cli;
pub mod decay;
pub mod error;
pub mod radial;
pub mod semigroup;
pub mod solver;

pub use error::{Error, Result};
