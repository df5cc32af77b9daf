//! Scattering toolkit for one-dimensional Schrodinger operators `-u'' + V u`
//! with non-mixed interface conditions at the edges `a < b` of the support of `V`.
//!
//! Modules are layered bottom-up: [`numerics`] (grids, quadrature, dense algebra),
//! [`potential`], [`jost`] (Jost solutions and the Jost function), [`krein`]
//! (boundary maps, Green kernels, Weyl matrix, perturbed resolvent, spectrum),
//! [`eigen`] (generalized eigenfunctions) and [`evolve`] (transforms, wave
//! operator, propagators).

pub mod eigen;
pub mod error;
pub mod evolve;
pub mod jost;
pub mod krein;
pub mod numerics;
pub mod potential;

pub use error::{Result, ScatterError};
pub use num_complex::Complex64 as C64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);
