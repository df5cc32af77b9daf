//! The twelve acceptance criteria. Each one returns a report made of individual
//! checks; a criterion passes when it ran without error and every check holds.

use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;

use scatter_core::eigen::{
    adjoint_pairing_check, apply_operator, compliant_function, pde_residual, psi_minus_free, psi_minus_theta,
    CompliantShape,
};
use scatter_core::evolve::{
    build_wave_operator, gaussian_packet, intertwining_residual, remainder_norm, spectral_bump, wave_limit_deviation,
    SpectralBasis,
};
use scatter_core::jost::{jost_solution, jost_wronskian, jost_wronskian_w0, ode_jost_oracle, Side};
use scatter_core::krein::green::{m_inverse_main_term, zeta_of};
use scatter_core::krein::{
    apply_resolvent_free, eigenvalue_track, green_kernels, m_matrix, spectral_scan, OneSidedTraces, Region, ThetaPair,
};
use scatter_core::numerics::grid::{INNER, LEFT, RIGHT};
use scatter_core::numerics::{SpatialGrid, SpectralGrid, WaveFunction};
use scatter_core::potential::{build_potential, Potential, PotentialSpec};
use scatter_core::{ScatterError, C64, I};

use crate::fit::log_slope;

pub const FREE_WRONSKIAN_REL: f64 = 1e-10;
pub const CROSS_VALIDATION: f64 = 1e-6;
pub const MODULUS_IDENTITY_REL: f64 = 1e-8;
pub const GREEN_JUMP: f64 = 1e-6;
pub const RESOLVENT_RESIDUAL: f64 = 1e-3;
pub const REFINEMENT_GAIN: f64 = 4.0;
pub const DET_AT_ZERO_THETA: f64 = 1e-10;
/// Bound on `‖M^{-1} - main term‖ / |θ|` over the ladder.
pub const MAIN_TERM_CONSTANT: f64 = 10.0;
pub const EIGENVALUE_ORACLE: f64 = 1e-8;
pub const TRACK_SLOPE_MIN: f64 = 0.9;
pub const INTERFACE_RESIDUAL: f64 = 1e-6;
pub const PDE_RESIDUAL: f64 = 1e-4;
pub const FLUX: f64 = 1e-8;
pub const SLOPE_TOL: f64 = 0.1;
pub const INTERTWINING: f64 = 1e-2;
pub const REMAINDER_CONSTANT: f64 = 10.0;
pub const REMAINDER_SPREAD: f64 = 3.0;
pub const PAIRING: f64 = 1e-4;
pub const RUNTIME_FREE_JOST: f64 = 1.0;
pub const RUNTIME_CROSS_VALIDATION: f64 = 10.0;
pub const RUNTIME_REMAINDER: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    Below { limit: f64 },
    AtLeast { limit: f64 },
    Near { target: f64, tol: f64 },
}

impl Relation {
    fn holds(&self, v: f64) -> bool {
        match *self {
            Relation::Below { limit } => v < limit,
            Relation::AtLeast { limit } => v >= limit,
            Relation::Near { target, tol } => (v - target).abs() <= tol,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Below { limit } => write!(f, "< {limit:.1e}"),
            Relation::AtLeast { limit } => write!(f, ">= {limit}"),
            Relation::Near { target, tol } => write!(f, "= {target} ± {tol}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    fn new(label: impl Into<String>, value: f64, relation: Relation) -> Self {
        Self { label: label.into(), value, relation, passed: relation.holds(value) }
    }

    fn below(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(label, value, Relation::Below { limit })
    }

    fn at_least(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(label, value, Relation::AtLeast { limit })
    }

    fn near(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::new(label, value, Relation::Near { target, tol })
    }

    /// Boolean condition recorded as 1 (holds) or 0.
    fn holds(label: impl Into<String>, ok: bool) -> Self {
        Self::new(label, if ok { 1.0 } else { 0.0 }, Relation::AtLeast { limit: 1.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Measurements reported alongside the checks without gating them.
    pub notes: Vec<String>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut detail: Vec<String> = match &self.error {
            Some(e) => vec![format!("error: {e}")],
            None => self
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{} = {:.3e} (want {})", c.label, c.value, c.relation))
                .collect(),
        };
        if detail.is_empty() {
            detail.push(format!("{} checks", self.checks.len()));
        }
        format!("criterion {:02} {:<22} {status}  [{:.1}s] {}", self.id, self.name, self.seconds, detail.join("; "))
    }
}

type Outcome = Result<(Vec<Check>, Vec<String>), ScatterError>;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "free_jost_function"),
    (2, "jost_cross_validation"),
    (3, "modulus_identity"),
    (4, "green_jumps"),
    (5, "resolvent_residual"),
    (6, "krein_structure"),
    (7, "spectrum"),
    (8, "eigenfunctions"),
    (9, "wave_operator"),
    (10, "uniform_remainder"),
    (11, "wave_limit"),
    (12, "adjoint_relation"),
];

pub fn run_criterion(id: u8) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown");
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => free_jost_function(),
        2 => jost_cross_validation(),
        3 => modulus_identity(),
        4 => green_jumps(),
        5 => resolvent_residual(),
        6 => krein_structure(),
        7 => spectrum(),
        8 => eigenfunctions(),
        9 => wave_operator(),
        10 => uniform_remainder(),
        11 => wave_limit(),
        12 => adjoint_relation(),
        _ => Err(ScatterError::Config(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((mut checks, notes)) => {
            let budget = match id {
                1 => Some(RUNTIME_FREE_JOST),
                2 => Some(RUNTIME_CROSS_VALIDATION),
                10 => Some(RUNTIME_REMAINDER),
                _ => None,
            };
            if let Some(limit) = budget {
                checks.push(Check::below("runtime_seconds", seconds, limit));
            }
            CriterionReport { id, name, checks, notes, error: None, seconds }
        }
        Err(e) => CriterionReport { id, name, checks: Vec::new(), notes: Vec::new(), error: Some(e.to_string()), seconds },
    }
}

/// Runs every criterion in order, calling `progress` after each.
pub fn run_all(mut progress: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|&(id, _)| {
            let r = run_criterion(id);
            progress(&r);
            r
        })
        .collect()
}

fn grid() -> SpatialGrid {
    SpatialGrid::new(-10.0, 0.0, 1.0, 10.0, [401, 101, 401]).expect("default grid")
}

fn barrier_on(g: &SpatialGrid) -> Potential {
    build_potential(&PotentialSpec::Barrier { height: 4.0 }, g).expect("barrier")
}

fn barrier() -> Potential {
    barrier_on(&grid())
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn free_jost_function() -> Outcome {
    let v = Potential::zero(grid());
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
        for j in 0..10 {
            let zeta = C64::from_polar(r, std::f64::consts::PI * j as f64 / 9.0);
            let w = jost_wronskian(zeta, &v)?;
            worst = worst.max((w + 2.0 * I * zeta).norm() / (2.0 * zeta).norm());
            count += 1;
        }
    }
    Ok((vec![Check::below(format!("max relative error over {count} points"), worst, FREE_WRONSKIAN_REL)], vec![]))
}

fn jost_cross_validation() -> Outcome {
    let v = barrier();
    let zetas = [C64::new(0.5, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(4.0, 0.0), I, C64::new(1.0, 1.0)];
    let mut worst: f64 = 0.0;
    for zeta in zetas {
        for side in [Side::Right, Side::Left] {
            let a = jost_solution(side, zeta, &v)?;
            let b = ode_jost_oracle(side, zeta, &v)?;
            worst = worst.max(a.chi.sub(&b.chi).sup_norm() / b.chi.sup_norm());
        }
    }
    Ok((vec![Check::below("sup-norm gap relative to sup|chi|", worst, CROSS_VALIDATION)], vec![]))
}

fn modulus_identity() -> Outcome {
    let v = barrier();
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let k = 0.25 * i as f64;
        let w = jost_wronskian(C64::new(k, 0.0), &v)?;
        let w0 = jost_wronskian_w0(k, &v)?;
        worst = worst.max((w.norm_sqr() - w0.norm_sqr() - 4.0 * k * k).abs() / (4.0 * k * k));
    }
    Ok((vec![Check::below("max relative error over 20 k", worst, MODULUS_IDENTITY_REL)], vec![]))
}

fn sample_z() -> [C64; 5] {
    [C64::new(-1.0, 0.0), C64::new(-2.0, 0.5), C64::new(0.5, 1.0), C64::new(3.0, -0.7), C64::new(-0.3, -2.0)]
}

fn green_jumps() -> Outcome {
    let v = barrier();
    let (mut g_res, mut h_res): (f64, f64) = (0.0, 0.0);
    for z in sample_z() {
        let basis = green_kernels(zeta_of(z), &v)?;
        for (gi, hi, at_b) in [(0, 1, true), (2, 3, false)] {
            let tg = OneSidedTraces::from_wave(&basis.values[gi])?;
            let th = OneSidedTraces::from_wave(&basis.values[hi])?;
            let pick = |t: &OneSidedTraces| if at_b { (t.b_minus, t.b_plus) } else { (t.a_minus, t.a_plus) };
            let ((gm, gp), (hm, hp)) = (pick(&tg), pick(&th));
            g_res = g_res.max((gp.0 - gm.0).norm()).max((gp.1 - gm.1 + 1.0).norm());
            h_res = h_res.max((hp.0 - hm.0 - 1.0).norm()).max((hp.1 - hm.1).norm());
        }
    }
    Ok((
        vec![Check::below("G: continuity and unit derivative drop", g_res, GREEN_JUMP), Check::below("H: unit jump, continuous derivative", h_res, GREEN_JUMP)],
        vec![],
    ))
}

fn resolvent_sup_residual(g: &SpatialGrid) -> Result<f64, ScatterError> {
    let v = barrier_on(g);
    let z = C64::new(-1.0, 0.0);
    let f = WaveFunction::from_fn(*g, |x| C64::new((-(x - 0.4) * (x - 0.4)).exp(), 0.0));
    let u = apply_resolvent_free(&f, z, &v)?;
    let r = apply_operator(&u, &v)?.sub(&u.scale(z)).sub(&f);
    let mut worst: f64 = 0.0;
    for seg in [LEFT, INNER, RIGHT] {
        let n = g.count(seg);
        for (i, val) in r.segment(seg).iter().enumerate() {
            let interface = (seg != LEFT && i == 0) || (seg != RIGHT && i + 1 == n);
            if !interface {
                worst = worst.max(val.norm());
            }
        }
    }
    Ok(worst)
}

fn resolvent_residual() -> Outcome {
    let coarse = resolvent_sup_residual(&grid())?;
    let fine = resolvent_sup_residual(&grid().refined())?;
    Ok((
        vec![Check::below("sup residual", coarse, RESOLVENT_RESIDUAL), Check::at_least("gain under grid doubling", coarse / fine, REFINEMENT_GAIN)],
        vec![format!("refined residual {fine:.3e}")],
    ))
}

fn krein_structure() -> Outcome {
    let v = barrier();
    let mut det_gap: f64 = 0.0;
    for n in 0..10 {
        let t = n as f64;
        let z = C64::new(-4.0 + 0.9 * t, 0.3 + 0.2 * (t * 1.3).sin());
        det_gap = det_gap.max((m_matrix(zeta_of(z), ThetaPair::zero(), &v)?.det_value - 16.0).norm());
    }
    let sizes = [1e-1, 1e-2, 1e-3];
    let mut errs = Vec::new();
    for &s in &sizes {
        let theta = ThetaPair::new(C64::new(s, 0.0), C64::new(0.0, s));
        let inv = m_matrix(I, theta, &v)?.inverse()?;
        errs.push((inv - m_inverse_main_term(theta)).norm());
    }
    let fit = log_slope(&sizes, &errs);
    let constant = max_of(errs.iter().zip(&sizes).map(|(e, s)| e / s));
    Ok((
        vec![
            Check::below("|det M - 16| at 10 points", det_gap, DET_AT_ZERO_THETA),
            Check::near("main-term error slope", fit.exponent, 1.0, SLOPE_TOL),
            Check::below("main-term error / |theta|", constant, MAIN_TERM_CONSTANT),
        ],
        vec![],
    ))
}

fn well_energy(depth: f64) -> f64 {
    let f = |k: f64| {
        let q = (depth - k * k).sqrt();
        (q * q - k * k) * q.sin() - 2.0 * q * k * q.cos()
    };
    let (mut lo, mut hi) = (1e-9, depth.sqrt() - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid
        } else {
            lo = mid
        }
    }
    let k = 0.5 * (lo + hi);
    -k * k
}

fn spectrum() -> Outcome {
    let v = barrier();
    let region = Region::new(-5.0, -0.1, -1.0, 1.0)?;
    let thetas = [
        ThetaPair::zero(),
        ThetaPair::real(0.05, 0.05),
        ThetaPair::new(C64::new(0.05, 0.0), C64::new(0.0, -0.03)),
        ThetaPair::new(C64::new(-0.05, 0.0), C64::new(0.0, 0.05)),
    ];
    let mut found = 0;
    for theta in thetas {
        found += spectral_scan(region, (25, 21), theta, &v)?.candidates.len();
    }
    let well_grid = SpatialGrid::new(-10.0, 0.0, 1.0, 10.0, [401, 201, 401])?;
    let well = build_potential(&PotentialSpec::Well { depth: 4.0 }, &well_grid)?;
    let e0 = well_energy(4.0);
    let at_zero = eigenvalue_track(e0 + 0.05, ThetaPair::zero(), &well, 1e-13)?;
    let sizes = [1e-2, 1e-3, 1e-4];
    let mut shifts = Vec::new();
    for &s in &sizes {
        shifts.push((eigenvalue_track(e0, ThetaPair::real(s, 0.0), &well, 1e-13)? - at_zero).norm());
    }
    let fit = log_slope(&sizes, &shifts);
    Ok((
        vec![
            Check::below("candidates for the positive barrier", found as f64, 0.5),
            Check::below("well eigenvalue vs matching equation", (at_zero - e0).norm(), EIGENVALUE_ORACLE),
            Check::at_least("eigenvalue shift slope", fit.exponent, TRACK_SLOPE_MIN),
        ],
        vec![],
    ))
}

fn eigenfunctions() -> Outcome {
    let v = barrier();
    let ks = [0.5, 1.0, 2.0, 3.0, -0.5, -1.0, -2.0, -3.0];
    let thetas = [
        ThetaPair::real(0.02, -0.01),
        ThetaPair::real(0.05, 0.05),
        ThetaPair::new(C64::new(0.0, 0.03), C64::new(0.0, -0.02)),
        ThetaPair::new(C64::new(0.03, 0.0), C64::new(0.0, 0.01)),
        ThetaPair::real(-0.04, 0.0),
    ];
    let (mut iface, mut pde, mut literal): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &k in &ks {
        for &theta in &thetas {
            let psi = psi_minus_theta(k, theta, &v)?;
            let res = psi.interface_residuals();
            iface = iface.max(res.max());
            literal = literal.max(res.a_derivative_literal);
            pde = pde.max(pde_residual(&psi.values, &psi.derivative, C64::new(k * k, 0.0), &v)?);
        }
    }
    let mut flux: f64 = 0.0;
    for k in [0.3, 1.0, 2.0, 4.0, -1.0, -2.7] {
        flux = flux.max((psi_minus_free(k, &v)?.flux() - 1.0).abs());
    }
    Ok((
        vec![
            Check::below(format!("interface residual over {} points", ks.len() * thetas.len()), iface, INTERFACE_RESIDUAL),
            Check::below("pde residual", pde, PDE_RESIDUAL),
            Check::below("flux defect at zero theta", flux, FLUX),
        ],
        vec![format!("literal left-endpoint condition residual {literal:.3e}")],
    ))
}

/// Barrier basis on the default 1024-node window, shared by criteria 9 to 11.
fn default_basis() -> Result<&'static SpectralBasis, ScatterError> {
    static BASIS: OnceLock<Result<SpectralBasis, ScatterError>> = OnceLock::new();
    BASIS.get_or_init(|| SpectralBasis::new(&barrier(), SpectralGrid::default())).as_ref().map_err(|e| e.clone())
}

fn wave_operator() -> Outcome {
    let b = default_basis()?;
    let sizes = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut devs = Vec::new();
    for &s in &sizes {
        devs.push(build_wave_operator(b, ThetaPair::real(s, s))?.deviation);
    }
    let thetas: Vec<f64> = sizes.iter().map(|s| 2.0 * s).collect();
    let fit = log_slope(&thetas, &devs);
    // intertwining on a reduced window, coarse and doubled grid
    let theta = ThetaPair::real(0.02, 0.02);
    let window = SpectralGrid::new(6.0, 256, 0.05)?;
    let mut res = Vec::new();
    for g in [grid(), grid().refined()] {
        let bb = SpectralBasis::new(&barrier_on(&g), window)?;
        let w = build_wave_operator(&bb, theta)?;
        let phi = bb.inverse(&spectral_bump(bb.kgrid, 1.5, 0.5))?;
        res.push(intertwining_residual(&bb, &w, &phi)?);
    }
    Ok((
        vec![
            Check::near("deviation slope", fit.exponent, 1.0, SLOPE_TOL),
            Check::below("intertwining residual", res[0], INTERTWINING),
            Check::at_least("intertwining gain under grid doubling", res[0] / res[1], REFINEMENT_GAIN),
        ],
        vec![format!("deviations {}", sci(&devs)), format!("intertwining coarse {:.3e} fine {:.3e}", res[0], res[1])],
    ))
}

fn uniform_remainder() -> Outcome {
    let b = default_basis()?;
    let theta = ThetaPair::real(0.01, 0.01);
    let w = build_wave_operator(b, theta)?;
    let times = [0.0, 1.0, 5.0, 20.0, 100.0];
    let rs: Vec<f64> = times.iter().map(|&t| remainder_norm(&b.nodes, &w, t)).collect();
    let max = max_of(rs.iter().copied());
    let min = rs.iter().copied().fold(f64::INFINITY, f64::min);
    let positive: Vec<f64> = rs[1..].to_vec();
    let spread_positive = max_of(positive.iter().copied()) / positive.iter().copied().fold(f64::INFINITY, f64::min);
    let sizes = [1e-2, 1e-3, 1e-4];
    let mut at10 = Vec::new();
    for &s in &sizes {
        let ws = if s == 1e-2 { w.clone() } else { build_wave_operator(b, ThetaPair::real(s, s))? };
        at10.push(remainder_norm(&b.nodes, &ws, 10.0));
    }
    let fit = log_slope(&sizes, &at10);
    Ok((
        vec![
            Check::below("max remainder / (|theta1|+|theta2|)", max / theta.size(), REMAINDER_CONSTANT),
            Check::below("max/min over the time sweep", max / min, REMAINDER_SPREAD),
            Check::near("slope at t=10", fit.exponent, 1.0, SLOPE_TOL),
        ],
        vec![format!("remainders {}", sci(&rs)), format!("max/min over t > 0: {spread_positive:.3}")],
    ))
}

fn wave_limit() -> Outcome {
    let b = default_basis()?;
    let w = build_wave_operator(b, ThetaPair::real(0.02, 0.0))?;
    let phi = gaussian_packet(b.grid(), -4.0, 1.0, 1.5);
    let mut devs = Vec::new();
    for t in [-2.0, -8.0, -32.0] {
        devs.push(wave_limit_deviation(b, &w, &phi, t)?);
    }
    Ok((
        vec![Check::holds("strictly decreasing over t = -2, -8, -32", devs[0] > devs[1] && devs[1] > devs[2])],
        vec![format!("deviations {}", sci(&devs))],
    ))
}

fn adjoint_relation() -> Outcome {
    let g = grid();
    let v = barrier();
    let theta = ThetaPair::new(C64::new(0.03, 0.0), C64::new(0.0, 0.01));
    let mut pairing: f64 = 0.0;
    for n in 0..8 {
        let (phi, _) = compliant_function(&g, theta, &CompliantShape::family(n));
        let (psi, _) = compliant_function(&g, theta.adjoint_partner(), &CompliantShape::family(n + 3));
        pairing = pairing.max(adjoint_pairing_check(&phi, &psi, theta, &v)?);
    }
    let mut symmetry: f64 = 0.0;
    for phase in [0.3, std::f64::consts::FRAC_PI_4, 1.2] {
        let on_locus = ThetaPair::new(C64::from_polar(0.02, phase), C64::from_polar(0.02, std::f64::consts::PI - phase));
        for n in 0..4 {
            let (phi, _) = compliant_function(&g, on_locus, &CompliantShape::family(n));
            let (psi, _) = compliant_function(&g, on_locus, &CompliantShape::family(n + 2));
            symmetry = symmetry.max(adjoint_pairing_check(&phi, &psi, on_locus, &v)?);
        }
    }
    Ok((vec![Check::below("pairing residual", pairing, PAIRING), Check::below("symmetry residual on the locus", symmetry, PAIRING)], vec![]))
}
