//! Propagators in spectral coordinates:
//! `e^{-itQ_0} = F^{-1} D(t) F`, `e^{-itQ_θ} = F_θ^{-1} D(t) Ŵ^{-1} F` with `D(t) = e^{-itk²}`.

use super::basis::{SpectralBasis, SpectralFunction};
use super::wave::{WaveOperator, NORM_TOL};
use crate::eigen::apply_operator;
use crate::numerics::grid::WaveFunction;
use crate::numerics::linalg::{op_norm_matrix_free, CVector};
use crate::{Result, ScatterError, C64};

/// Diagonal of `D(t)`.
pub fn phases(nodes: &[f64], t: f64) -> CVector {
    CVector::from_iterator(nodes.len(), nodes.iter().map(|k| C64::new(0.0, -t * k * k).exp()))
}

fn check(basis: &SpectralBasis, wave: &WaveOperator) -> Result<()> {
    if wave.n_k() != basis.n_k() || wave.psi_theta.nrows() != basis.grid().len() {
        return Err(ScatterError::Config("wave operator was built on another basis".into()));
    }
    Ok(())
}

/// `e^{-itQ_0} φ`.
pub fn propagate_free(basis: &SpectralBasis, phi: &WaveFunction, t: f64) -> Result<WaveFunction> {
    let g = basis.forward(phi)?;
    let d = phases(&basis.nodes, t);
    let values = g.to_vector().component_mul(&d);
    basis.inverse(&SpectralFunction::new(basis.kgrid, values.as_slice().to_vec())?)
}

/// `e^{-itQ_θ} φ`.
pub fn propagate_theta(basis: &SpectralBasis, wave: &WaveOperator, phi: &WaveFunction, t: f64) -> Result<WaveFunction> {
    check(basis, wave)?;
    let g = basis.forward(phi)?;
    let d = phases(&basis.nodes, t);
    let values = (&wave.inverse * g.to_vector()).component_mul(&d);
    basis.inverse_with(&wave.psi_theta, &SpectralFunction::new(basis.kgrid, values.as_slice().to_vec())?)
}

/// `W_θ φ = F_θ^{-1} F φ`.
pub fn apply_wave_operator(basis: &SpectralBasis, wave: &WaveOperator, phi: &WaveFunction) -> Result<WaveFunction> {
    check(basis, wave)?;
    basis.inverse_with(&wave.psi_theta, &basis.forward(phi)?)
}

/// `‖e^{-itQ_θ} - e^{-itQ_0}‖` compressed to the window, i.e. `‖Ŵ D(t) Ŵ^{-1} - D(t)‖`.
pub fn remainder_norm(nodes: &[f64], wave: &WaveOperator, t: f64) -> f64 {
    let d = phases(nodes, t);
    let dc = d.map(|v| v.conj());
    op_norm_matrix_free(
        wave.n_k(),
        |v| &wave.matrix * (&wave.inverse * v).component_mul(&d) - v.component_mul(&d),
        |u| wave.inverse.ad_mul(&wave.matrix.ad_mul(u).component_mul(&dc)) - u.component_mul(&dc),
        NORM_TOL,
    )
}

/// Quadrature defect of the interaction-picture kernel `D(-t) Ŵ D(t)` near `|k_l| = |k_j|`.
///
/// Across the skipped node the phased principal-value sum of `e^{-iφr}/r` gives `i(π - φ)`
/// instead of `iπ`, `φ = 2|k| t h`, and the neighbour difference quotient picks up the phases.
/// The defect restores `iφ` (wrapped into `(-2π, 2π)`) on the point-mass cells and strips the
/// phases from the neighbour correction.
fn point_mass_defect(basis: &SpectralBasis, wave: &WaveOperator, t: f64, v: &CVector) -> CVector {
    let kg = basis.kgrid;
    let h = kg.weight();
    let n = basis.n_k();
    let m = n / 2;
    let half = kg.half_nodes();
    let scale = -1.0 / (2.0 * std::f64::consts::PI);
    let index = |positive: bool, r: usize| if positive { m + r } else { m - 1 - r };
    let mut out = CVector::zeros(n);
    for j in 0..n {
        let s = kg.half_index(j).expect("k = 0 excluded");
        let kappa = half[s];
        let phi = 2.0 * kappa * t * h;
        let wrapped = phi - 2.0 * std::f64::consts::PI * (phi / (2.0 * std::f64::consts::PI)).trunc();
        let tau = basis.gamma1[j].map(|x| x.conj());
        let neighbours: Vec<(usize, f64)> = if s == 0 {
            vec![(1, -1.0)]
        } else if s + 1 == m {
            vec![(m - 2, 1.0)]
        } else {
            vec![(s + 1, -0.5), (s - 1, 0.5)]
        };
        let mut acc = C64::new(0.0, 0.0);
        for positive in [true, false] {
            let l = index(positive, s);
            acc += C64::new(0.0, wrapped / (2.0 * kappa)) * tau.dot(&wave.coefficients[l]) * v[l];
            for &(r, coef) in &neighbours {
                let ln = index(positive, r);
                let p = half[r];
                let lift = C64::new(1.0, 0.0) - C64::new(0.0, -t * (p * p - kappa * kappa)).exp();
                acc += coef / (kappa + p) * lift * tau.dot(&wave.coefficients[ln]) * v[ln];
            }
        }
        out[j] = acc * scale;
    }
    out
}

/// `‖e^{itQ_θ} e^{-itQ_0} φ - W_θ φ‖ = ‖Ŵ (D(-t) Ŵ^{-1} D(t) - I) F φ‖`, with the
/// interaction-picture inverse corrected to first order by [`point_mass_defect`].
pub fn wave_limit_deviation(basis: &SpectralBasis, wave: &WaveOperator, phi: &WaveFunction, t: f64) -> Result<f64> {
    check(basis, wave)?;
    let g = basis.forward(phi)?.to_vector();
    let d = phases(&basis.nodes, t);
    let dc = d.map(|v| v.conj());
    let rotated_inverse = |v: &CVector| (&wave.inverse * v.component_mul(&d)).component_mul(&dc);
    let y0 = rotated_inverse(&g);
    let y = &y0 - rotated_inverse(&point_mass_defect(basis, wave, t, &y0));
    let out = &wave.matrix * (y - &g);
    Ok(out.norm() * basis.kgrid.weight().sqrt())
}

/// `‖Q_θ W_θ φ - W_θ Q_0 φ‖ / ‖φ‖`, with `Q_θ` applied by finite differences to the
/// synthesized state and `W_θ Q_0 φ = F_θ^{-1} k² F φ`.
pub fn intertwining_residual(basis: &SpectralBasis, wave: &WaveOperator, phi: &WaveFunction) -> Result<f64> {
    check(basis, wave)?;
    let g = basis.forward(phi)?;
    let wphi = basis.inverse_with(&wave.psi_theta, &g)?;
    let lhs = apply_operator(&wphi, &basis.v)?;
    let kg: Vec<C64> = g.values.iter().zip(&basis.nodes).map(|(v, k)| v * (k * k)).collect();
    let rhs = basis.inverse_with(&wave.psi_theta, &SpectralFunction::new(basis.kgrid, kg)?)?;
    Ok(lhs.sub(&rhs).norm() / phi.norm())
}
