//! Boundary triple, Green kernels, Weyl matrix, Krein formula and point spectrum.

pub mod boundary;
pub mod green;
pub mod interface;
pub mod resolvent;
pub mod scan;

pub use boundary::{boundary_maps, boundary_maps_with_derivative, BoundaryData, OneSidedTraces};
pub use green::{
    defect_basis, green_kernels, m_inverse_main_term, m_matrix, weyl_matrix, zeta_of, DefectBasis,
    SpectralDeterminant,
};
pub use interface::{interface_matrices, interface_residuals, InterfaceMatrices, InterfaceResiduals, ThetaPair};
pub use resolvent::{apply_resolvent_free, perturbed_resolvent_kernel, KreinResolvent};
pub use scan::{eigenvalue_track, matching_function, spectral_scan, Region, ScanResult};
