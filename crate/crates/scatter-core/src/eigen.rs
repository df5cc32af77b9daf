//! Generalized eigenfunctions `ψ-(·, k, θ)`, scattering amplitudes and the adjoint pairing.
//!
//! `ψ-(·, k)` is the scattering state with incoming wave `e^{ikx}`: for `k > 0` it is
//! `e^{ikx} + R e^{-ikx}` left of `a` and `T e^{ikx}` right of `b`, mirrored for `k < 0`.

use serde::{Deserialize, Serialize};

use crate::jost::JostPair;
use crate::krein::boundary::{BoundaryData, OneSidedTraces};
use crate::krein::green::{defect_basis, weyl_matrix, DefectBasis, SpectralDeterminant};
use crate::krein::interface::{interface_matrices, interface_residuals, InterfaceResiduals, ThetaPair};
use crate::numerics::grid::{SpatialGrid, WaveFunction, INNER, LEFT, RIGHT};
use crate::numerics::linalg::CVector4;
use crate::numerics::stencil::{first_derivative, second};
use crate::potential::Potential;
use crate::{Result, ScatterError, C64, I};

/// Interface conditions of pairing inputs must hold to this tolerance.
pub const PAIRING_INPUT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEigenfunction {
    pub k: f64,
    pub theta: ThetaPair,
    pub values: WaveFunction,
    pub derivative: WaveFunction,
    pub r: C64,
    pub t: C64,
    /// Worst deviation of the exterior tables from the plane-wave form.
    pub fit_residual: f64,
}

impl GeneralizedEigenfunction {
    pub fn traces(&self) -> OneSidedTraces {
        OneSidedTraces::from_pair(&self.values, &self.derivative)
    }

    pub fn interface_residuals(&self) -> InterfaceResiduals {
        interface_residuals(&self.traces(), self.theta)
    }

    /// `|R|² + |T|²`.
    pub fn flux(&self) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr()
    }
}

/// `c = M^{-1}(|k|, θ) B_θ Γ1 ψ-(·, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub k: f64,
    pub theta: ThetaPair,
    pub c: [C64; 4],
}

/// Least-squares fit of `u ≈ p e^{ikx} + m e^{-ikx}` on one segment: `(p, m, rms)`.
fn fit_plane_waves(u: &WaveFunction, seg: usize, k: f64) -> (C64, C64, f64) {
    let xs = u.grid().nodes(seg);
    let vals = u.segment(seg);
    let (mut g11, mut g12, mut g22) = (0.0, C64::new(0.0, 0.0), 0.0);
    let (mut r1, mut r2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for (x, v) in xs.iter().zip(vals) {
        let e1 = (I * k * x).exp();
        let e2 = (-I * k * x).exp();
        g11 += e1.norm_sqr();
        g22 += e2.norm_sqr();
        g12 += e1.conj() * e2;
        r1 += e1.conj() * v;
        r2 += e2.conj() * v;
    }
    let det = g11 * g22 - g12.norm_sqr();
    let p = (r1 * g22 - g12 * r2) / det;
    let m = (r2 * g11 - g12.conj() * r1) / det;
    let rms = (xs
        .iter()
        .zip(vals)
        .map(|(x, v)| (v - p * (I * k * x).exp() - m * (-I * k * x).exp()).norm_sqr())
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    (p, m, rms)
}

/// Reads `R`, `T` off the exterior segments; the residual collects the fit error and
/// the deviation of the incoming and missing amplitudes from 1 and 0.
pub fn fit_scattering(u: &WaveFunction, k: f64) -> (C64, C64, f64) {
    let (incoming_seg, outgoing_seg) = if k > 0.0 { (LEFT, RIGHT) } else { (RIGHT, LEFT) };
    let (p_in, m_in, rms_in) = fit_plane_waves(u, incoming_seg, k);
    let (p_out, m_out, rms_out) = fit_plane_waves(u, outgoing_seg, k);
    let residual = rms_in.max(rms_out).max((p_in - 1.0).norm()).max(m_out.norm());
    (m_in, p_out, residual)
}

fn check_k(k: f64) -> Result<()> {
    if !k.is_finite() || k == 0.0 {
        return Err(ScatterError::Config("generalized eigenfunctions need a finite k != 0".into()));
    }
    Ok(())
}

/// `ψ-(·, k)` from a Jost pair computed at `ζ = |k|`.
pub fn psi_minus_from_pair(k: f64, pair: &JostPair) -> Result<GeneralizedEigenfunction> {
    check_k(k)?;
    if pair.w.norm() < crate::krein::green::W_MIN {
        return Err(ScatterError::SingularJost(pair.w.norm()));
    }
    let scale = 2.0 * I * k / pair.w;
    let (values, derivative) = if k > 0.0 {
        (pair.plus.chi.scale(-scale), pair.plus.chi_prime.scale(-scale))
    } else {
        (pair.minus.chi.scale(scale), pair.minus.chi_prime.scale(scale))
    };
    let (r, t, fit_residual) = fit_scattering(&values, k);
    Ok(GeneralizedEigenfunction { k, theta: ThetaPair::zero(), values, derivative, r, t, fit_residual })
}

/// Scattering state of the reference operator.
pub fn psi_minus_free(k: f64, v: &Potential) -> Result<GeneralizedEigenfunction> {
    check_k(k)?;
    psi_minus_from_pair(k, &JostPair::new(C64::new(k.abs(), 0.0), v)?)
}

/// Perturbation data at one `|k|`: defect basis and `M^{-1} B_θ`.
#[derive(Debug, Clone)]
pub struct KreinAtK {
    pub basis: DefectBasis,
    pub det: SpectralDeterminant,
    pub coupling: nalgebra::Matrix4<C64>,
}

impl KreinAtK {
    pub fn new(pair: &JostPair, theta: ThetaPair) -> Result<Self> {
        let basis = defect_basis(pair)?;
        let q = weyl_matrix(&basis)?;
        let mats = interface_matrices(theta);
        let det = SpectralDeterminant::new(pair.zeta, &q, &mats);
        let coupling = det.inverse()? * mats.b;
        Ok(Self { basis, det, coupling })
    }

    pub fn coefficients(&self, psi: &GeneralizedEigenfunction) -> CVector4 {
        let gamma1 = BoundaryData::from_traces(&psi.traces()).gamma1;
        self.coupling * gamma1
    }

    /// `ψ - Σ c_i g_i`.
    pub fn perturb(&self, psi: &GeneralizedEigenfunction, theta: ThetaPair) -> GeneralizedEigenfunction {
        let c = self.coefficients(psi);
        let mut values = psi.values.clone();
        let mut derivative = psi.derivative.clone();
        for i in 0..4 {
            values.axpy(-c[i], &self.basis.values[i]);
            derivative.axpy(-c[i], &self.basis.derivatives[i]);
        }
        let (r, t, fit_residual) = fit_scattering(&values, psi.k);
        GeneralizedEigenfunction { k: psi.k, theta, values, derivative, r, t, fit_residual }
    }
}

/// Scattering state of the perturbed operator by the Krein representation.
pub fn psi_minus_theta(k: f64, theta: ThetaPair, v: &Potential) -> Result<GeneralizedEigenfunction> {
    check_k(k)?;
    let pair = JostPair::new(C64::new(k.abs(), 0.0), v)?;
    let psi = psi_minus_from_pair(k, &pair)?;
    if theta.is_zero() {
        return Ok(psi);
    }
    Ok(KreinAtK::new(&pair, theta)?.perturb(&psi, theta))
}

pub fn expansion_coefficients(k: f64, theta: ThetaPair, v: &Potential) -> Result<ExpansionCoefficients> {
    check_k(k)?;
    let pair = JostPair::new(C64::new(k.abs(), 0.0), v)?;
    let psi = psi_minus_from_pair(k, &pair)?;
    let c = KreinAtK::new(&pair, theta)?.coefficients(&psi);
    Ok(ExpansionCoefficients { k, theta, c: [c[0], c[1], c[2], c[3]] })
}

fn is_interface_node(g: &SpatialGrid, seg: usize, i: usize) -> bool {
    match seg {
        LEFT => i + 1 == g.count(LEFT),
        RIGHT => i == 0,
        _ => i == 0 || i + 1 == g.count(INNER),
    }
}

/// Sup over non-interface nodes of `|-(ψ')' + (V - k²) ψ|` and `|Dψ - ψ'|`, with the
/// outer derivatives taken by segmented finite differences of the tables.
pub fn pde_residual(u: &WaveFunction, du: &WaveFunction, energy: C64, v: &Potential) -> Result<f64> {
    let g = *u.grid();
    let mut worst: f64 = 0.0;
    for seg in [LEFT, INNER, RIGHT] {
        let h = g.spacing(seg);
        let ddu = first_derivative(du.segment(seg), h)?;
        let d_u = first_derivative(u.segment(seg), h)?;
        for i in 0..g.count(seg) {
            if is_interface_node(&g, seg, i) {
                continue;
            }
            let val = u.at(seg, i);
            let eq = -ddu[i] + (v.at(seg, i) - energy) * val;
            worst = worst.max(eq.norm()).max((d_u[i] - du.at(seg, i)).norm());
        }
    }
    Ok(worst)
}

/// `-u'' + V u` by segmented finite differences.
pub fn apply_operator(u: &WaveFunction, v: &Potential) -> Result<WaveFunction> {
    let d2 = second(u)?;
    let mut out = d2.scale(C64::new(-1.0, 0.0));
    for seg in [LEFT, INNER, RIGHT] {
        for (i, o) in out.segment_mut(seg).iter_mut().enumerate() {
            *o += u.at(seg, i) * v.at(seg, i);
        }
    }
    Ok(out)
}

/// Smooth decaying pieces used to build functions in the domain of `Q_θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompliantShape {
    pub left_center: f64,
    pub right_center: f64,
    pub width: f64,
    pub momentum: f64,
    pub inner_amplitude: C64,
}

impl CompliantShape {
    /// A fixed family indexed by `n`.
    pub fn family(n: usize) -> Self {
        let t = n as f64;
        Self {
            left_center: -1.5 - 0.3 * t,
            right_center: 2.0 + 0.2 * t,
            width: 1.2 + 0.1 * t,
            momentum: 0.5 + 0.25 * t,
            inner_amplitude: C64::new(0.3 * (t + 1.0).cos(), 0.2 * (t + 1.0).sin()),
        }
    }

    fn exterior(&self, x: f64, center: f64) -> (C64, C64) {
        let s = (x - center) / self.width;
        let env = (-s * s).exp();
        let ph = (I * self.momentum * x).exp();
        let d_env = -2.0 * s / self.width * env;
        (ph * env, ph * (d_env + I * self.momentum * env))
    }

    fn inner_base(&self, x: f64) -> (C64, C64) {
        let a = self.inner_amplitude;
        (a * (I * 2.0 * x).exp(), a * 2.0 * I * (I * 2.0 * x).exp())
    }
}

/// Function in the domain of `Q_θ`: Gaussian packets outside `[a, b]` and, inside, a
/// smooth base plus the cubic Hermite correction that enforces the interface conditions.
/// Returns the values and the exact derivative.
pub fn compliant_function(grid: &SpatialGrid, theta: ThetaPair, shape: &CompliantShape) -> (WaveFunction, WaveFunction) {
    let (a, b) = (grid.a(), grid.b());
    let s1 = (-theta.theta1 / 2.0).exp();
    let s2 = (-theta.theta2 / 2.0).exp();
    let (la, dla) = shape.exterior(a, shape.left_center);
    let (rb, drb) = shape.exterior(b, shape.right_center);
    let (ia, dia) = shape.inner_base(a);
    let (ib, dib) = shape.inner_base(b);
    // correction p with p(a), p'(a), p(b), p'(b) prescribed
    let (pa, dpa) = (s1 * la - ia, s2 * dla - dia);
    let (pb, dpb) = (s1 * rb - ib, s2 * drb - dib);
    let len = b - a;
    let correction = |x: f64| -> (C64, C64) {
        let t = (x - a) / len;
        let (t2, t3) = (t * t, t * t * t);
        let v = pa * (2.0 * t3 - 3.0 * t2 + 1.0)
            + dpa * len * (t3 - 2.0 * t2 + t)
            + pb * (-2.0 * t3 + 3.0 * t2)
            + dpb * len * (t3 - t2);
        let d = (pa * (6.0 * t2 - 6.0 * t) + pb * (-6.0 * t2 + 6.0 * t)) / len
            + dpa * (3.0 * t2 - 4.0 * t + 1.0)
            + dpb * (3.0 * t2 - 2.0 * t);
        (v, d)
    };
    let piece = |seg: usize, x: f64| -> (C64, C64) {
        match seg {
            LEFT => shape.exterior(x, shape.left_center),
            RIGHT => shape.exterior(x, shape.right_center),
            _ => {
                let (u, du) = shape.inner_base(x);
                let (p, dp) = correction(x);
                (u + p, du + dp)
            }
        }
    };
    (
        WaveFunction::from_segment_fn(*grid, |seg, x| piece(seg, x).0),
        WaveFunction::from_segment_fn(*grid, |seg, x| piece(seg, x).1),
    )
}

/// `|⟨ψ, Q_θ φ⟩ - ⟨Q_{θ'} ψ, φ⟩|` with `θ' = (-θ2*, -θ1*)`, after checking that `φ`
/// and `ψ` meet their interface conditions (derivative traces by one-sided stencils).
pub fn adjoint_pairing_check(phi: &WaveFunction, psi: &WaveFunction, theta: ThetaPair, v: &Potential) -> Result<f64> {
    let partner = theta.adjoint_partner();
    for (u, th, name) in [(phi, theta, "first"), (psi, partner, "second")] {
        let res = interface_residuals(&OneSidedTraces::from_wave(u)?, th).max();
        let scale = 1.0 + u.sup_norm();
        if res > PAIRING_INPUT_TOL * scale {
            return Err(ScatterError::Config(format!(
                "{name} pairing input violates its interface conditions by {res:.3e}"
            )));
        }
    }
    let q_phi = apply_operator(phi, v)?;
    let q_psi = apply_operator(psi, v)?;
    Ok((psi.inner(&q_phi) - q_psi.inner(phi)).norm())
}
