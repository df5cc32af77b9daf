//! Reference resolvent applied by quadrature and the perturbed resolvent kernel
//! `G_θ(x, y) = G(x, y) - Σ [M^{-1} B_θ]_ij g_i(x) g_j(y)`.

use super::green::{defect_basis, weyl_matrix, zeta_of, DefectBasis, SpectralDeterminant};
use super::interface::{interface_matrices, ThetaPair};
use crate::jost::JostPair;
use crate::numerics::grid::{WaveFunction, INNER, LEFT, RIGHT};
use crate::numerics::linalg::{CMatrix4, CVector4};
use crate::numerics::quad::cumulative;
use crate::potential::Potential;
use crate::{Result, ScatterError, C64};

/// `u = ∫ G(·, y) f(y) dy` for the reference operator with potential `v`.
pub fn apply_resolvent_free(f: &WaveFunction, z: C64, v: &Potential) -> Result<WaveFunction> {
    if f.grid() != v.grid() {
        return Err(ScatterError::Config("source and potential live on different grids".into()));
    }
    let pair = JostPair::new(zeta_of(z), v)?;
    Ok(apply_with_pair(f, &pair))
}

/// `(1/w) [χ+(x) ∫_{y<x} χ- f + χ-(x) ∫_{y>x} χ+ f]` with running Simpson sums.
///
/// The upper integrals are accumulated from the right end so that their error stays
/// relative to the tail that the growing `χ-` multiplies.
pub fn apply_with_pair(f: &WaveFunction, pair: &JostPair) -> WaveFunction {
    let g = *f.grid();
    let w = pair.w;
    let minus_f = pair.minus.chi.zip_map(f, |a, b| a * b);
    let plus_f = pair.plus.chi.zip_map(f, |a, b| a * b);
    let mut lower: [Vec<C64>; 3] = Default::default();
    let mut upper: [Vec<C64>; 3] = Default::default();
    let mut acc = C64::new(0.0, 0.0);
    for seg in [LEFT, INNER, RIGHT] {
        let cl = cumulative(minus_f.segment(seg), g.spacing(seg));
        lower[seg] = cl.iter().map(|c| c + acc).collect();
        acc += *cl.last().expect("segment");
    }
    acc = C64::new(0.0, 0.0);
    for seg in [RIGHT, INNER, LEFT] {
        let reversed: Vec<C64> = plus_f.segment(seg).iter().rev().copied().collect();
        let cr = cumulative(&reversed, g.spacing(seg));
        upper[seg] = cr.iter().rev().map(|c| c + acc).collect();
        acc += *cr.last().expect("segment");
    }
    let mut out = WaveFunction::zeros(g);
    for seg in [LEFT, INNER, RIGHT] {
        let chi_p = pair.plus.chi.segment(seg);
        let chi_m = pair.minus.chi.segment(seg);
        for (i, dst) in out.segment_mut(seg).iter_mut().enumerate() {
            *dst = (chi_p[i] * lower[seg][i] + chi_m[i] * upper[seg][i]) / w;
        }
    }
    out
}

/// Everything needed to evaluate the perturbed resolvent at one `z`.
#[derive(Debug, Clone)]
pub struct KreinResolvent {
    pub pair: JostPair,
    pub basis: DefectBasis,
    pub q: CMatrix4,
    pub det: SpectralDeterminant,
    /// `M^{-1} B_θ`.
    pub coupling: CMatrix4,
}

impl KreinResolvent {
    pub fn new(zeta: C64, theta: ThetaPair, v: &Potential) -> Result<Self> {
        Self::from_pair(JostPair::new(zeta, v)?, theta)
    }

    pub fn from_pair(pair: JostPair, theta: ThetaPair) -> Result<Self> {
        let basis = defect_basis(&pair)?;
        let q = weyl_matrix(&basis)?;
        let mats = interface_matrices(theta);
        let det = SpectralDeterminant::new(pair.zeta, &q, &mats);
        let coupling = det.inverse()? * mats.b;
        Ok(Self { pair, basis, q, det, coupling })
    }

    pub fn theta(&self) -> ThetaPair {
        self.det.theta
    }

    /// `(g_1(x), ..., g_4(x))` at an arbitrary point.
    pub fn basis_at(&self, x: f64, v: &Potential) -> CVector4 {
        let g = self.pair.grid();
        let t = &self.basis.traces;
        let w = t.w;
        let (p, _) = self.pair.plus.eval(x, v);
        let (n, _) = self.pair.minus.eval(x, v);
        let (pb, dpb) = t.plus_b;
        let (nb, dnb) = t.minus_b;
        let (pa, dpa) = t.plus_a;
        let (na, dna) = t.minus_a;
        let gb = if x >= g.b() { CVector4::new(p * nb, p * dnb, C64::default(), C64::default()) }
            else { CVector4::new(n * pb, n * dpb, C64::default(), C64::default()) };
        let ga = if x >= g.a() { CVector4::new(C64::default(), C64::default(), p * na, p * dna) }
            else { CVector4::new(C64::default(), C64::default(), n * pa, n * dpa) };
        (gb + ga) / w
    }

    /// Reference kernel `G(x, y)`.
    pub fn reference_kernel(&self, x: f64, y: f64, v: &Potential) -> C64 {
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        self.pair.plus.eval(hi, v).0 * self.pair.minus.eval(lo, v).0 / self.pair.w
    }

    /// `G_θ(x, y)`.
    pub fn kernel(&self, x: f64, y: f64, v: &Potential) -> C64 {
        let gx = self.basis_at(x, v);
        let gy = self.basis_at(y, v);
        self.reference_kernel(x, y, v) - gx.dot(&(self.coupling * gy))
    }

    /// `x ↦ G_θ(x, y)` on the grid with its derivative, for `y` off `{a, b}`.
    pub fn section(&self, y: f64, v: &Potential) -> (WaveFunction, WaveFunction) {
        let grid = *self.pair.grid();
        let w = self.pair.w;
        let (py, _) = self.pair.plus.eval(y, v);
        let (ny, _) = self.pair.minus.eval(y, v);
        let c = self.coupling * self.basis_at(y, v);
        let pick = |plus: &WaveFunction, minus: &WaveFunction, basis: &[WaveFunction; 4]| {
            let mut out = WaveFunction::zeros(grid);
            for seg in [LEFT, INNER, RIGHT] {
                for (i, x) in grid.nodes(seg).into_iter().enumerate() {
                    let reference =
                        if x >= y { plus.at(seg, i) * ny / w } else { minus.at(seg, i) * py / w };
                    let corr: C64 = (0..4).map(|k| basis[k].at(seg, i) * c[k]).sum();
                    out.segment_mut(seg)[i] = reference - corr;
                }
            }
            out
        };
        let val = pick(&self.pair.plus.chi, &self.pair.minus.chi, &self.basis.values);
        let der = pick(&self.pair.plus.chi_prime, &self.pair.minus.chi_prime, &self.basis.derivatives);
        (val, der)
    }
}

/// `G_θ(x, y)` at `z` (with `ζ = i sqrt(-z)`).
pub fn perturbed_resolvent_kernel(x: f64, y: f64, z: C64, theta: ThetaPair, v: &Potential) -> Result<C64> {
    Ok(KreinResolvent::new(zeta_of(z), theta, v)?.kernel(x, y, v))
}
