//! Scattering states on a momentum window and the generalized Fourier transform pair
//! `(F f)(k) = (2π)^{-1/2} ∫ ψ-(x, k)* f(x) dx`, `(F^{-1} g)(x) = (2π)^{-1/2} ∫ ψ-(x, k) g(k) dk`.

use rayon::prelude::*;

use crate::eigen::{psi_minus_from_pair, GeneralizedEigenfunction};
use crate::jost::JostPair;
use crate::krein::boundary::BoundaryData;
use crate::numerics::grid::{SpatialGrid, WaveFunction};
use crate::numerics::linalg::{CMatrix, CVector, CVector4};
use crate::numerics::spectral::SpectralGrid;
use crate::potential::{check_positive, Potential};
use crate::{Result, ScatterError, C64};

pub(crate) fn inv_sqrt_two_pi() -> f64 {
    1.0 / (2.0 * std::f64::consts::PI).sqrt()
}

/// Complex samples over the momentum nodes, ascending in `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    pub kgrid: SpectralGrid,
    pub values: Vec<C64>,
}

impl SpectralFunction {
    pub fn new(kgrid: SpectralGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != kgrid.n_k {
            return Err(ScatterError::Length { expected: kgrid.n_k, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ScatterError::NonFinite("spectral samples"));
        }
        Ok(Self { kgrid, values })
    }

    pub fn from_fn(kgrid: SpectralGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = kgrid.nodes().into_iter().map(f).collect();
        Self { kgrid, values }
    }

    /// `(∫ |g|² dk)^{1/2}` with the cell weights of the window.
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.kgrid.weight()).sqrt()
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.values)
    }
}

/// Reference scattering states `ψ-(·, k_j)` tabulated over the grid, one column per node.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub v: Potential,
    pub kgrid: SpectralGrid,
    pub nodes: Vec<f64>,
    /// Jost pairs at the positive half nodes.
    pub pairs: Vec<JostPair>,
    /// `N_x × N_k`, column `j` is `ψ-(·, k_j)` flattened.
    pub psi: CMatrix,
    /// `Γ1 ψ-(·, k_j)` per node.
    pub gamma1: Vec<CVector4>,
    /// Spatial Simpson weights over the flattened grid.
    pub weights: Vec<f64>,
}

impl SpectralBasis {
    pub fn new(v: &Potential, kgrid: SpectralGrid) -> Result<Self> {
        kgrid.validate()?;
        if !check_positive(v) {
            return Err(ScatterError::Config("generalized Fourier transforms need a positive potential".into()));
        }
        if kgrid.exclusion == 0.0 {
            return Err(ScatterError::Config("the momentum window must exclude k = 0".into()));
        }
        let half = kgrid.half_nodes();
        let pairs: Vec<JostPair> =
            half.par_iter().map(|&p| JostPair::new(C64::new(p, 0.0), v)).collect::<Result<_>>()?;
        let nodes = kgrid.nodes();
        let states: Vec<GeneralizedEigenfunction> = (0..nodes.len())
            .into_par_iter()
            .map(|j| psi_minus_from_pair(nodes[j], &pairs[kgrid.half_index(j).expect("k = 0 excluded")]))
            .collect::<Result<_>>()?;
        let grid = *v.grid();
        let nx = grid.len();
        let mut psi = CMatrix::zeros(nx, nodes.len());
        let mut gamma1 = Vec::with_capacity(nodes.len());
        for (j, s) in states.iter().enumerate() {
            psi.column_mut(j).copy_from_slice(&s.values.to_flat());
            gamma1.push(BoundaryData::from_traces(&s.traces()).gamma1);
        }
        Ok(Self { v: v.clone(), kgrid, nodes, pairs, psi, gamma1, weights: grid.flat_weights() })
    }

    pub fn grid(&self) -> &SpatialGrid {
        self.v.grid()
    }

    pub fn n_k(&self) -> usize {
        self.nodes.len()
    }

    /// Reference state at node `j`.
    pub fn state(&self, j: usize) -> GeneralizedEigenfunction {
        let pair = &self.pairs[self.kgrid.half_index(j).expect("k = 0 excluded")];
        psi_minus_from_pair(self.nodes[j], pair).expect("validated at construction")
    }

    fn check_grid(&self, phi: &WaveFunction) -> Result<()> {
        if phi.grid() != self.grid() {
            return Err(ScatterError::Config("wave function lives on a different grid".into()));
        }
        Ok(())
    }

    /// `F φ`.
    pub fn forward(&self, phi: &WaveFunction) -> Result<SpectralFunction> {
        self.check_grid(phi)?;
        let weighted: Vec<C64> = phi.to_flat().iter().zip(&self.weights).map(|(p, w)| p * *w).collect();
        let g = self.psi.ad_mul(&CVector::from_vec(weighted)) * C64::new(inv_sqrt_two_pi(), 0.0);
        SpectralFunction::new(self.kgrid, g.as_slice().to_vec())
    }

    /// `F^{-1} g`.
    pub fn inverse(&self, f: &SpectralFunction) -> Result<WaveFunction> {
        self.inverse_with(&self.psi, f)
    }

    /// Synthesis with another table of states (columns over the same nodes).
    pub fn inverse_with(&self, states: &CMatrix, f: &SpectralFunction) -> Result<WaveFunction> {
        if f.kgrid != self.kgrid {
            return Err(ScatterError::Config("spectral function lives on a different window".into()));
        }
        let x = states * f.to_vector() * C64::new(inv_sqrt_two_pi() * self.kgrid.weight(), 0.0);
        WaveFunction::from_flat(*self.grid(), x.as_slice())
    }
}

/// `F φ` on a fresh basis.
pub fn forward_transform(phi: &WaveFunction, v: &Potential, kgrid: SpectralGrid) -> Result<SpectralFunction> {
    SpectralBasis::new(v, kgrid)?.forward(phi)
}

/// `F^{-1} f` on a fresh basis.
pub fn inverse_transform(f: &SpectralFunction, v: &Potential) -> Result<WaveFunction> {
    SpectralBasis::new(v, f.kgrid)?.inverse(f)
}

/// Gaussian packet `exp(-(x - x0)²/(2σ²) + i k0 x)` normalized in `L²`.
pub fn gaussian_packet(grid: &SpatialGrid, x0: f64, sigma: f64, k0: f64) -> WaveFunction {
    let u = WaveFunction::from_fn(*grid, |x| {
        let s = (x - x0) / sigma;
        C64::new(0.0, k0 * x).exp() * (-0.5 * s * s).exp()
    });
    let n = u.norm();
    u.scale(C64::new(1.0 / n, 0.0))
}

/// Gaussian bump `exp(-(k - k0)²/(2σ²))` in momentum.
pub fn spectral_bump(kgrid: SpectralGrid, k0: f64, sigma: f64) -> SpectralFunction {
    SpectralFunction::from_fn(kgrid, |k| {
        let s = (k - k0) / sigma;
        C64::new((-0.5 * s * s).exp(), 0.0)
    })
}
