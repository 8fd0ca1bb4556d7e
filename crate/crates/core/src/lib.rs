//! The dihedral 2l-body problem with a homogeneous potential of degree -alpha.
//!
//! Bodies of equal mass form, at every instant, one orbit of the dihedral
//! group D_l acting on R^3. The symmetric subspace is three dimensional, so
//! configurations reduce to a point of the shape sphere (theta, phi) and a
//! size rho. This crate provides
//!
//! * [`params`] and [`geometry`]: problem constants, sphere charts, group
//!   orbits and reduction to the fundamental wedge;
//! * [`numerics`]: Gauss-Jacobi quadrature, Brent roots, Dormand-Prince
//!   integration and small dense eigenvalue problems;
//! * [`potential`]: the reduced potential as a direct sum and as a
//!   singular integral, its derivatives and the l-adic averaging operator;
//! * [`central`]: all central configurations and their stability;
//! * [`dynamics`]: the McGehee-regularized flow, energy manifolds,
//!   homothetic motions and lifting back to physical size and time;
//! * [`acceptance`]: the end-to-end verification suite.

// negated comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod central;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod params;
pub mod potential;

pub use error::{Error, Result};
pub use params::ProblemParams;
pub use geometry::SphereConfig;
