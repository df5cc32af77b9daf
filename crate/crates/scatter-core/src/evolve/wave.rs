//! Stationary wave operator `W_θ = F_θ^{-1} F` realized in the reference spectral
//! coordinates, `Ŵ = F F_θ^{-1} = I + K`, with
//! `K_jl = -(1/2π) Σ_i conj(Γ1 ψ_j)_i c_i(k_l) S(|k_j|, |k_l|)`.
//!
//! `S` discretizes `1/(κ² - p² - i0)` on the half nodes: off-diagonal cells carry
//! `h/(κ² - p²)`, the diagonal carries the `iπ/(2κ)` point mass, and the cell that the
//! skipped node would have contributed to the principal value is restored by a
//! difference quotient of `1/(κ + p)` on the neighbours.

use rayon::prelude::*;

use super::basis::SpectralBasis;
use crate::eigen::KreinAtK;
use crate::krein::interface::ThetaPair;
use crate::numerics::linalg::{inverse, op_norm_estimate, op_norm_matrix_free, CMatrix, CVector, CVector4};
use crate::{Result, ScatterError, C64, I};

/// Power-iteration tolerance for operator norms of window compressions.
pub const NORM_TOL: f64 = 1e-3;
/// Order of the Neumann partial sum compared with the LU inverse.
pub const NEUMANN_ORDER: usize = 8;
/// Largest admitted `|θ_i|`; beyond it the similarity regime is not assumed.
pub const THETA_MAX: f64 = 0.1;

/// `m × m` discretization of `1/(κ² - p² - i0)` times the cell weight, rows `κ = p_s`.
pub fn resolvent_weights(half: &[f64], h: f64) -> CMatrix {
    let m = half.len();
    let mut s = CMatrix::zeros(m, m);
    for si in 0..m {
        let kappa = half[si];
        for r in 0..m {
            if r != si {
                s[(si, r)] = C64::new(h / (kappa * kappa - half[r] * half[r]), 0.0);
            }
        }
        s[(si, si)] += I * std::f64::consts::PI / (2.0 * kappa);
        let f = |r: usize| 1.0 / (kappa + half[r]);
        if m >= 2 {
            if si == 0 {
                s[(si, 1)] -= f(1);
                s[(si, 0)] += f(0);
            } else if si == m - 1 {
                s[(si, m - 1)] -= f(m - 1);
                s[(si, m - 2)] += f(m - 2);
            } else {
                s[(si, si + 1)] -= 0.5 * f(si + 1);
                s[(si, si - 1)] += 0.5 * f(si - 1);
            }
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct WaveOperator {
    pub theta: ThetaPair,
    /// `Ŵ` on the window.
    pub matrix: CMatrix,
    /// `Ŵ^{-1}` by LU.
    pub inverse: CMatrix,
    /// `‖Ŵ - I‖` (largest singular value).
    pub deviation: f64,
    /// `‖Ŵ Ŵ^{-1} - I‖`.
    pub solve_residual: f64,
    /// Expansion coefficients `c(k_j)` per node.
    pub coefficients: Vec<CVector4>,
    /// `N_x × N_k`, column `j` is `ψ-(·, k_j, θ)` flattened.
    pub psi_theta: CMatrix,
}

impl WaveOperator {
    pub fn n_k(&self) -> usize {
        self.matrix.nrows()
    }

    /// `K = Ŵ - I`.
    pub fn kernel_part(&self) -> CMatrix {
        &self.matrix - CMatrix::identity(self.n_k(), self.n_k())
    }

    /// `‖Σ_{n<=N} (I - Ŵ)^n - Ŵ^{-1}‖`, evaluated without forming the powers.
    pub fn neumann_discrepancy(&self, order: usize) -> f64 {
        let k = self.kernel_part();
        let n = self.n_k();
        let series = |v: &CVector, adjoint: bool| {
            let mut term = v.clone();
            let mut acc = v.clone();
            for _ in 0..order {
                term = if adjoint { -k.ad_mul(&term) } else { -(&k * &term) };
                acc += &term;
            }
            acc
        };
        op_norm_matrix_free(
            n,
            |v| series(v, false) - &self.inverse * v,
            |v| series(v, true) - self.inverse.ad_mul(v),
            NORM_TOL,
        )
    }
}

/// Assembles `Ŵ` and its inverse for one interface parameter.
pub fn build_wave_operator(basis: &SpectralBasis, theta: ThetaPair) -> Result<WaveOperator> {
    check_theta(theta)?;
    let kg = basis.kgrid;
    let n = basis.n_k();
    let half = kg.half_nodes();
    let krein: Vec<KreinAtK> =
        basis.pairs.par_iter().map(|p| KreinAtK::new(p, theta)).collect::<Result<_>>()?;
    let coefficients: Vec<CVector4> = (0..n)
        .into_par_iter()
        .map(|j| {
            let s = kg.half_index(j).expect("k = 0 excluded");
            krein[s].coupling * basis.gamma1[j]
        })
        .collect();
    let s_mat = resolvent_weights(&half, kg.weight());
    let scale = -1.0 / (2.0 * std::f64::consts::PI);
    let tau: Vec<CVector4> = basis.gamma1.iter().map(|g| g.map(|v| v.conj())).collect();
    let mut matrix = CMatrix::identity(n, n);
    let columns: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|l| {
            let r = kg.half_index(l).expect("k = 0 excluded");
            (0..n)
                .map(|j| {
                    let s = kg.half_index(j).expect("k = 0 excluded");
                    tau[j].dot(&coefficients[l]) * s_mat[(s, r)] * scale
                })
                .collect()
        })
        .collect();
    for (l, col) in columns.into_iter().enumerate() {
        for (j, v) in col.into_iter().enumerate() {
            matrix[(j, l)] += v;
        }
    }
    let inverse = inverse(&matrix).map_err(|_| ScatterError::Singular("wave operator LU".into()))?;
    let identity = CMatrix::identity(n, n);
    let deviation = op_norm_estimate(&(&matrix - &identity), NORM_TOL)?;
    let solve_residual =
        op_norm_matrix_free(n, |v| &matrix * (&inverse * v) - v, |v| inverse.ad_mul(&matrix.ad_mul(v)) - v, NORM_TOL);
    // perturbed states ψ - Σ c_i g_i
    let grid = *basis.grid();
    let nx = grid.len();
    let mut psi_theta = basis.psi.clone();
    let cols: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let s = kg.half_index(j).expect("k = 0 excluded");
            let mut col = vec![C64::new(0.0, 0.0); nx];
            for i in 0..4 {
                let c = coefficients[j][i];
                for (dst, g) in col.iter_mut().zip(krein[s].basis.values[i].to_flat()) {
                    *dst += c * g;
                }
            }
            col
        })
        .collect();
    for (j, col) in cols.into_iter().enumerate() {
        for (i, c) in col.into_iter().enumerate() {
            psi_theta[(i, j)] -= c;
        }
    }
    Ok(WaveOperator { theta, matrix, inverse, deviation, solve_residual, coefficients, psi_theta })
}

fn check_theta(theta: ThetaPair) -> Result<()> {
    if theta.theta1.norm() > THETA_MAX || theta.theta2.norm() > THETA_MAX {
        return Err(ScatterError::Config(format!("|θ_i| must not exceed {THETA_MAX}")));
    }
    Ok(())
}

/// Single entry `Ŵ_jl`, without assembling the matrix.
pub fn wave_matrix_entry(basis: &SpectralBasis, theta: ThetaPair, j: usize, l: usize) -> Result<C64> {
    check_theta(theta)?;
    let kg = basis.kgrid;
    let (s, r) = match (kg.half_index(j), kg.half_index(l)) {
        (Some(s), Some(r)) if j < basis.n_k() && l < basis.n_k() => (s, r),
        _ => return Err(ScatterError::Config("entry index outside the window".into())),
    };
    let krein = KreinAtK::new(&basis.pairs[r], theta)?;
    let c = krein.coupling * basis.gamma1[l];
    let half = kg.half_nodes();
    let s_mat = resolvent_weights(&half, kg.weight());
    let tau = basis.gamma1[j].map(|v| v.conj());
    let delta = if j == l { 1.0 } else { 0.0 };
    Ok(C64::new(delta, 0.0) - tau.dot(&c) * s_mat[(s, r)] / (2.0 * std::f64::consts::PI))
}
