//! Generalized Fourier transforms, the stationary wave operator and the propagators
//! `e^{-itQ_0}`, `e^{-itQ_θ}` on a momentum window.

pub mod basis;
pub mod dynamics;
pub mod wave;

pub use basis::{
    forward_transform, gaussian_packet, inverse_transform, spectral_bump, SpectralBasis, SpectralFunction,
};
pub use dynamics::{
    apply_wave_operator, intertwining_residual, phases, propagate_free, propagate_theta, remainder_norm,
    wave_limit_deviation,
};
pub use wave::{
    build_wave_operator, resolvent_weights, wave_matrix_entry, WaveOperator, NEUMANN_ORDER, NORM_TOL, THETA_MAX,
};
