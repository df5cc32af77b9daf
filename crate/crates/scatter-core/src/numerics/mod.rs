//! Grids, quadrature, finite-difference stencils and dense complex linear algebra.

pub mod grid;
pub mod linalg;
pub mod quad;
pub mod spectral;
pub mod stencil;

pub use grid::{SpatialGrid, WaveFunction, INNER, LEFT, RIGHT};
pub use linalg::{op_norm_estimate, CMatrix, CVector};
pub use quad::quadrature;
pub use spectral::SpectralGrid;
