//! One-sided interface traces and the boundary maps `Γ0`, `Γ1`.

use serde::{Deserialize, Serialize};

use crate::numerics::grid::{WaveFunction, INNER, LEFT, RIGHT};
use crate::numerics::linalg::CVector4;
use crate::numerics::stencil::{derivative_at_end, derivative_at_start};
use crate::{Result, C64};

/// `(value, derivative)` at `a-`, `a+`, `b-`, `b+`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSidedTraces {
    pub a_minus: (C64, C64),
    pub a_plus: (C64, C64),
    pub b_minus: (C64, C64),
    pub b_plus: (C64, C64),
}

impl OneSidedTraces {
    /// Values are node reads; derivatives come from one-sided fourth-order stencils.
    pub fn from_wave(u: &WaveFunction) -> Result<Self> {
        let g = u.grid();
        let d_end = |seg| derivative_at_end(u.segment(seg), g.spacing(seg));
        let d_start = |seg| derivative_at_start(u.segment(seg), g.spacing(seg));
        Ok(Self {
            a_minus: (u.a_minus(), d_end(LEFT)?),
            a_plus: (u.a_plus(), d_start(INNER)?),
            b_minus: (u.b_minus(), d_end(INNER)?),
            b_plus: (u.b_plus(), d_start(RIGHT)?),
        })
    }

    /// Exact reads from a value table and a derivative table.
    pub fn from_pair(u: &WaveFunction, du: &WaveFunction) -> Self {
        Self {
            a_minus: (u.a_minus(), du.a_minus()),
            a_plus: (u.a_plus(), du.a_plus()),
            b_minus: (u.b_minus(), du.b_minus()),
            b_plus: (u.b_plus(), du.b_plus()),
        }
    }
}

/// `Γ0 u` (jumps) and `Γ1 u` (averages).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub gamma0: CVector4,
    pub gamma1: CVector4,
}

impl BoundaryData {
    pub fn from_traces(t: &OneSidedTraces) -> Self {
        let (ua_m, da_m) = t.a_minus;
        let (ua_p, da_p) = t.a_plus;
        let (ub_m, db_m) = t.b_minus;
        let (ub_p, db_p) = t.b_plus;
        Self {
            gamma0: CVector4::new(db_m - db_p, ub_p - ub_m, da_m - da_p, ua_p - ua_m),
            gamma1: CVector4::new(ub_p + ub_m, db_p + db_m, ua_p + ua_m, da_p + da_m) * C64::new(0.5, 0.0),
        }
    }

    /// `⟨Γ0 ψ, Γ1 φ⟩ - ⟨Γ1 ψ, Γ0 φ⟩`, the boundary side of the Green identity.
    pub fn green_form(psi: &BoundaryData, phi: &BoundaryData) -> C64 {
        psi.gamma0.dotc(&phi.gamma1) - psi.gamma1.dotc(&phi.gamma0)
    }
}

/// Boundary maps with derivative traces from finite differences.
pub fn boundary_maps(u: &WaveFunction) -> Result<BoundaryData> {
    Ok(BoundaryData::from_traces(&OneSidedTraces::from_wave(u)?))
}

/// Boundary maps when the derivative is tabulated.
pub fn boundary_maps_with_derivative(u: &WaveFunction, du: &WaveFunction) -> BoundaryData {
    BoundaryData::from_traces(&OneSidedTraces::from_pair(u, du))
}
