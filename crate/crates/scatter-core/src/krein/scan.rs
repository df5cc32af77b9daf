//! Point spectrum: lattice scan of `d(z) = w(ζ) det M(z, θ)` and secant tracking of
//! a bound state under the interface perturbation.
//!
//! `det M` alone is identically 16 at `θ = 0`, so the scan multiplies by the Jost
//! function; the product stays holomorphic off `z >= 0` because the pole of `q` at a
//! zero of `w` has rank one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::green::{m_from_traces, zeta_of};
use super::interface::ThetaPair;
use crate::jost::{march_inner, JostPair};
use crate::potential::Potential;
use crate::{Result, ScatterError, C64, I};

/// Acceptance threshold on `|d|` after refining a winding cell.
pub const DIP_THRESHOLD: f64 = 1e-3;
const SECANT_MAX_ITER: usize = 60;

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in the `z` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(ScatterError::Config("region must have positive extent".into()));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

/// One lattice node of the scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub z: C64,
    pub det_m: C64,
    pub d: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub re_nodes: Vec<f64>,
    pub im_nodes: Vec<f64>,
    /// Row-major over `(im, re)`.
    pub points: Vec<ScanPoint>,
    pub candidates: Vec<C64>,
}

/// `w(ζ) det M(z, θ)` and `det M` at `z`.
pub fn scan_function(z: C64, theta: ThetaPair, v: &Potential) -> Result<(C64, C64)> {
    let pair = JostPair::new(zeta_of(z), v)?;
    let t = pair.traces();
    if t.w == C64::new(0.0, 0.0) {
        return Err(ScatterError::SingularJost(0.0));
    }
    let det = m_from_traces(&t, theta).det_value;
    Ok((t.w * det, det))
}

fn lattice(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Winding number of `d` around one lattice cell, from its four corners.
fn cell_winding(corners: [C64; 4]) -> i64 {
    let mut total = 0.0;
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

fn secant(f: impl Fn(C64) -> Result<C64>, x0: C64, x1: C64, tol: f64) -> Result<C64> {
    let (mut xa, mut xb) = (x0, x1);
    let (mut fa, mut fb) = (f(xa)?, f(xb)?);
    for _ in 0..SECANT_MAX_ITER {
        if fb == C64::new(0.0, 0.0) {
            return Ok(xb);
        }
        let denom = fb - fa;
        if denom.norm() == 0.0 || !denom.is_finite() {
            return Err(ScatterError::NoRoot("secant slope vanished".into()));
        }
        let step = fb * (xb - xa) / denom;
        xa = xb;
        fa = fb;
        xb -= step;
        fb = f(xb)?;
        if step.norm() <= tol * (1.0 + xb.norm()) {
            return Ok(xb);
        }
    }
    Err(ScatterError::NoRoot(format!("secant did not settle within {SECANT_MAX_ITER} steps")))
}

/// Lattice scan with winding-number confirmation and secant refinement.
///
/// If a lattice row falls on the real axis the whole lattice is shifted by a
/// quarter spacing so that real eigenvalues lie inside cells.
pub fn spectral_scan(
    region: Region,
    resolution: (usize, usize),
    theta: ThetaPair,
    v: &Potential,
) -> Result<ScanResult> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(ScatterError::Config("scan resolution needs at least 2 nodes per axis".into()));
    }
    let re_nodes = lattice(region.re_min, region.re_max, nx);
    let mut im_nodes = lattice(region.im_min, region.im_max, ny);
    let dy = (region.im_max - region.im_min) / (ny - 1) as f64;
    if im_nodes.iter().any(|y| y.abs() < 1e-9 * dy) {
        im_nodes.iter_mut().for_each(|y| *y += 0.25 * dy);
    }
    let zs: Vec<C64> = im_nodes.iter().flat_map(|&y| re_nodes.iter().map(move |&x| C64::new(x, y))).collect();
    let points: Vec<ScanPoint> = zs
        .par_iter()
        .map(|&z| scan_function(z, theta, v).map(|(d, det_m)| ScanPoint { z, det_m, d }))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| points[j * nx + i].d;
    let mut candidates: Vec<C64> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if corners.iter().any(|c| c.norm() == 0.0) || cell_winding(corners) == 0 {
                continue;
            }
            let center = C64::new(
                0.5 * (re_nodes[i] + re_nodes[i + 1]),
                0.5 * (im_nodes[j] + im_nodes[j + 1]),
            );
            let nudge = C64::new(1e-3 * (re_nodes[i + 1] - re_nodes[i]), 0.0);
            let root = secant(|z| scan_function(z, theta, v).map(|r| r.0), center, center + nudge, 1e-13);
            if let Ok(z) = root {
                let (d, _) = scan_function(z, theta, v)?;
                let dup = candidates.iter().any(|c| (c - z).norm() < 1e-8 * (1.0 + z.norm()));
                if d.norm() < DIP_THRESHOLD && !dup {
                    candidates.push(z);
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ScanResult { re_nodes, im_nodes, points, candidates })
}

/// Interior matching function at energy `e`: `v_L(b-) q - v_L'(b-) p`, where `v_L`
/// starts at `a+` from the scaled left exterior data and `(p, q)` is the scaled right
/// exterior data at `b-`. Equals `-w` at `θ = 0`.
pub fn matching_function(e: C64, theta: ThetaPair, v: &Potential) -> Result<C64> {
    let zeta = zeta_of(e);
    let g = v.grid();
    let s1 = (-theta.theta1 / 2.0).exp();
    let s2 = (-theta.theta2 / 2.0).exp();
    let na = (-I * zeta * g.a()).exp();
    let pb = (I * zeta * g.b()).exp();
    let (ub, dub) = march_inner(zeta, v, s1 * na, s2 * (-I * zeta * na))?;
    let (p, q) = (s1 * pb, s2 * (I * zeta * pb));
    Ok(ub * q - dub * p)
}

/// Bound-state energy of the perturbed operator continued from `e0`.
pub fn eigenvalue_track(e0: f64, theta: ThetaPair, v: &Potential, tol: f64) -> Result<C64> {
    if !(tol > 0.0) {
        return Err(ScatterError::Config("tracking tolerance must be positive".into()));
    }
    if !(e0 < 0.0) {
        return Err(ScatterError::Config("bound-state energies are negative".into()));
    }
    let start = C64::new(e0, 0.0);
    let h = C64::new(1e-4 * (1.0 + e0.abs()), 0.0);
    let root = secant(|e| matching_function(e, theta, v), start, start + h, tol)?;
    let radius = 0.5 * e0.abs();
    if (root - start).norm() > radius {
        return Err(ScatterError::NoRoot(format!("root {root} left the search disk of radius {radius}")));
    }
    Ok(root)
}
