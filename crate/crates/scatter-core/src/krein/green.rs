//! Green kernels of the reference operator, the defect basis `g(e_i)`, the Weyl
//! matrix `q` and the interface matrix `M = B_θ q - A_θ`.
//!
//! With `w = χ+ χ-' - χ+' χ-`:
//! `G(x, y) = χ+(max) χ-(min) / w` and `H(x, y) = ∂_y G(x, y)`, so `∂_x G` jumps by
//! `-1` at `x = y` while `H` jumps by `+1`.


use super::interface::{interface_matrices, InterfaceMatrices, ThetaPair};
use crate::jost::{JostPair, JostTraces};
use crate::numerics::grid::{WaveFunction, INNER, LEFT, RIGHT};
use crate::numerics::linalg::{inverse4, CMatrix4};
use crate::potential::Potential;
use crate::{Result, ScatterError, C64, I};

/// Below this `|w|` the Green kernels are treated as singular.
pub const W_MIN: f64 = 1e-12;
/// Tolerance of the `∂_x G(y±, y) = H(y∓, y)` trace check.
pub const TRACE_CONSISTENCY: f64 = 1e-6;

/// `ζ = i sqrt(-z)`: the root of `ζ² = z` with `Im ζ >= 0`, cut along `z >= 0`.
pub fn zeta_of(z: C64) -> C64 {
    I * (-z).sqrt()
}

/// The four sections `G(·, b)`, `H(·, b)`, `G(·, a)`, `H(·, a)` with their derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectBasis {
    pub zeta: C64,
    pub traces: JostTraces,
    pub values: [WaveFunction; 4],
    pub derivatives: [WaveFunction; 4],
}

impl DefectBasis {
    pub fn z(&self) -> C64 {
        self.zeta * self.zeta
    }

    pub fn w(&self) -> C64 {
        self.traces.w
    }
}

fn check_w(w: C64) -> Result<()> {
    if w.norm() < W_MIN || !w.is_finite() {
        return Err(ScatterError::SingularJost(w.norm()));
    }
    Ok(())
}

/// Defect basis from a Jost pair.
pub fn defect_basis(pair: &JostPair) -> Result<DefectBasis> {
    let t = pair.traces();
    check_w(t.w)?;
    let w = t.w;
    let grid = *pair.grid();
    let (p, dp) = (&pair.plus.chi, &pair.plus.chi_prime);
    let (n, dn) = (&pair.minus.chi, &pair.minus.chi_prime);
    // coefficient pairs (on the χ+ branch, on the χ- branch)
    let sections = [
        (t.minus_b.0, t.plus_b.0, true),
        (t.minus_b.1, t.plus_b.1, true),
        (t.minus_a.0, t.plus_a.0, false),
        (t.minus_a.1, t.plus_a.1, false),
    ];
    let mut values: Vec<WaveFunction> = Vec::with_capacity(4);
    let mut derivatives: Vec<WaveFunction> = Vec::with_capacity(4);
    for (c_plus, c_minus, at_b) in sections {
        let on_plus = |seg: usize| if at_b { seg == RIGHT } else { seg != LEFT };
        let mut val = WaveFunction::zeros(grid);
        let mut der = WaveFunction::zeros(grid);
        for seg in [LEFT, INNER, RIGHT] {
            let plus_branch = on_plus(seg);
            let (f, df, c) = if plus_branch { (p, dp, c_plus) } else { (n, dn, c_minus) };
            let scale = c / w;
            for (dst, src) in val.segment_mut(seg).iter_mut().zip(f.segment(seg)) {
                *dst = src * scale;
            }
            for (dst, src) in der.segment_mut(seg).iter_mut().zip(df.segment(seg)) {
                *dst = src * scale;
            }
        }
        values.push(val);
        derivatives.push(der);
    }
    let values: [WaveFunction; 4] = values.try_into().expect("four sections");
    let derivatives: [WaveFunction; 4] = derivatives.try_into().expect("four sections");
    Ok(DefectBasis { zeta: pair.zeta, traces: t, values, derivatives })
}

/// Green kernels `G`, `H` at `y ∈ {a, b}` packaged as the defect basis.
pub fn green_kernels(zeta: C64, v: &Potential) -> Result<DefectBasis> {
    defect_basis(&JostPair::new(zeta, v)?)
}

/// `G(x, y)` from values and derivatives of the Jost solutions at `x` and `y`.
pub fn green_value(w: C64, plus_x: C64, minus_x: C64, plus_y: C64, minus_y: C64, x_ge_y: bool) -> C64 {
    if x_ge_y {
        plus_x * minus_y / w
    } else {
        minus_x * plus_y / w
    }
}

/// Weyl matrix `q_ij = [Γ1 g(e_j)]_i`, computed from the Jost traces.
pub fn weyl_from_traces(t: &JostTraces) -> CMatrix4 {
    let (pa, dpa) = t.plus_a;
    let (pb, dpb) = t.plus_b;
    let (na, dna) = t.minus_a;
    let (nb, dnb) = t.minus_b;
    let h = 0.5;
    CMatrix4::new(
        pb * nb,
        (pb * dnb + nb * dpb) * h,
        pb * na,
        pb * dna,
        (dpb * nb + dnb * pb) * h,
        dpb * dnb,
        dpb * na,
        dpb * dna,
        na * pb,
        na * dpb,
        pa * na,
        (pa * dna + na * dpa) * h,
        dna * pb,
        dna * dpb,
        (dpa * na + dna * pa) * h,
        dpa * dna,
    ) / t.w
}

/// Weyl matrix with the trace consistency check `∂_x G(y±, y) = H(y∓, y)` on the tables.
pub fn weyl_matrix(basis: &DefectBasis) -> Result<CMatrix4> {
    let (g, dg) = (&basis.values, &basis.derivatives);
    let checks = [
        (dg[0].b_plus(), g[1].b_minus()),
        (dg[0].b_minus(), g[1].b_plus()),
        (dg[2].a_plus(), g[3].a_minus()),
        (dg[2].a_minus(), g[3].a_plus()),
    ];
    for (lhs, rhs) in checks {
        let err = (lhs - rhs).norm();
        let limit = TRACE_CONSISTENCY * (1.0 + lhs.norm());
        if err > limit {
            return Err(ScatterError::Accuracy { what: "Green trace consistency", value: err, limit });
        }
    }
    Ok(weyl_from_traces(&basis.traces))
}

/// `M = B_θ q - A_θ` at one spectral parameter, with its determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDeterminant {
    pub zeta: C64,
    pub z: C64,
    pub theta: ThetaPair,
    pub m: CMatrix4,
    pub det_value: C64,
}

impl SpectralDeterminant {
    pub fn new(zeta: C64, q: &CMatrix4, mats: &InterfaceMatrices) -> Self {
        let m = mats.b * q - mats.a;
        Self { zeta, z: zeta * zeta, theta: mats.theta, m, det_value: m.determinant() }
    }

    pub fn inverse(&self) -> Result<CMatrix4> {
        inverse4(&self.m)
    }
}

/// `M(ζ, θ)` from traces already at hand.
pub fn m_from_traces(t: &JostTraces, theta: ThetaPair) -> SpectralDeterminant {
    SpectralDeterminant::new(t.zeta, &weyl_from_traces(t), &interface_matrices(theta))
}

/// `M(ζ, θ)` for a potential.
pub fn m_matrix(zeta: C64, theta: ThetaPair, v: &Potential) -> Result<SpectralDeterminant> {
    let pair = JostPair::new(zeta, v)?;
    check_w(pair.w)?;
    Ok(m_from_traces(&pair.traces(), theta))
}

/// Diagonal main term `-A_θ^{-1}` of `M^{-1}`.
pub fn m_inverse_main_term(theta: ThetaPair) -> CMatrix4 {
    let m = interface_matrices(theta);
    CMatrix4::from_diagonal(&m.alpha.map(|a| -1.0 / a).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::SpatialGrid;
    use crate::numerics::linalg::CVector4;
    use crate::potential::{build_potential, PotentialSpec};
    use crate::krein::boundary::boundary_maps_with_derivative;

    fn grid() -> SpatialGrid {
        SpatialGrid::new(-10.0, 0.0, 1.0, 10.0, [401, 101, 401]).unwrap()
    }

    #[test]
    fn free_kernel_closed_form() {
        let v = Potential::zero(grid());
        let basis = green_kernels(C64::new(1.0, 0.0), &v).unwrap();
        let g = grid();
        for seg in [LEFT, INNER, RIGHT] {
            for (i, x) in g.nodes(seg).into_iter().enumerate() {
                let want = 0.5 * I * (I * (x - 1.0f64).abs()).exp();
                assert!((basis.values[0].at(seg, i) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn defect_basis_is_dual_to_gamma0() {
        let v = build_potential(&PotentialSpec::Barrier { height: 4.0 }, &grid()).unwrap();
        let basis = green_kernels(C64::new(0.7, 0.4), &v).unwrap();
        for i in 0..4 {
            let d = boundary_maps_with_derivative(&basis.values[i], &basis.derivatives[i]);
            let mut e = CVector4::zeros();
            e[i] = C64::new(1.0, 0.0);
            assert!((d.gamma0 - e).norm() < 1e-10, "i={i}");
        }
    }

    #[test]
    fn weyl_matrix_matches_gamma1_of_basis() {
        let v = build_potential(&PotentialSpec::Barrier { height: 4.0 }, &grid()).unwrap();
        let basis = green_kernels(C64::new(1.2, 0.3), &v).unwrap();
        let q = weyl_matrix(&basis).unwrap();
        for j in 0..4 {
            let d = boundary_maps_with_derivative(&basis.values[j], &basis.derivatives[j]);
            for i in 0..4 {
                assert!((q[(i, j)] - d.gamma1[i]).norm() < 1e-12);
            }
        }
        assert!((q - q.transpose()).norm() < 1e-12);
    }

    #[test]
    fn free_weyl_entry_at_i() {
        let q = weyl_matrix(&green_kernels(I, &Potential::zero(grid())).unwrap()).unwrap();
        assert!((q[(0, 0)] - 0.5).norm() < 1e-12);
    }

    #[test]
    fn determinant_is_sixteen_at_zero_theta() {
        let v = build_potential(&PotentialSpec::Barrier { height: 4.0 }, &grid()).unwrap();
        let d = m_matrix(C64::new(0.3, 1.1), ThetaPair::zero(), &v).unwrap();
        assert!((d.det_value - 16.0).norm() < 1e-12);
    }

    #[test]
    fn zeta_of_is_upper_half_plane() {
        for z in [C64::new(-1.0, 0.0), C64::new(2.0, 0.1), C64::new(2.0, -0.1), C64::new(-3.0, -2.0)] {
            let zeta = zeta_of(z);
            assert!(zeta.im >= 0.0);
            assert!((zeta * zeta - z).norm() < 1e-14);
        }
    }
}
