//! Jost solutions `χ±(·, ζ)`, the Jost function `w(ζ)` and `w0(k)`.
//!
//! `χ+` equals `e^{iζx}` for `x >= b` and `χ-` equals `e^{-iζx}` for `x <= a`.
//! Inside `[a, b]` the rescaled functions `b± = e^{∓iζx} χ±` solve a Volterra
//! equation that is iterated to convergence (Picard series). Outside the support
//! both solutions are continued in closed form from their traces.

use serde::{Deserialize, Serialize};

use crate::numerics::grid::{SpatialGrid, WaveFunction, INNER, LEFT, RIGHT};
use crate::numerics::quad::prefix_rule;
use crate::potential::Potential;
use crate::{Result, ScatterError, C64, I};

/// Below this `|ζΔ|` the kernels switch to their Taylor expansions.
pub const TAYLOR_SWITCH: f64 = 1e-4;
/// Default Picard stopping threshold on the sup norm of the last increment (relative).
pub const PICARD_TOL: f64 = 1e-14;
pub const PICARD_MAX_ITER: usize = 64;
/// Allowed spread of a Wronskian evaluated at three nodes, relative to `1 + |w|`.
pub const WRONSKIAN_SPREAD: f64 = 1e-8;
const CAUCHY_MAX_ITER: usize = 400;
/// Runge-Kutta steps per grid spacing in [`ode_jost_oracle`].
pub const ORACLE_SUBSTEPS: usize = 8;

/// `Right` is `χ+` (pure exponential for `x >= b`), `Left` is `χ-` (pure exponential for `x <= a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `e^{iζΔ} sin(ζΔ)/ζ`, the kernel of the rescaled Volterra equation.
pub fn rescaled_kernel(zeta: C64, delta: f64) -> C64 {
    let u = zeta * delta;
    if u.norm() < TAYLOR_SWITCH {
        delta * (1.0 + I * u - u * u * (2.0 / 3.0))
    } else {
        (I * u).exp() * u.sin() / zeta
    }
}

/// `sin(ζΔ)/ζ`.
pub fn sine_kernel(zeta: C64, delta: f64) -> C64 {
    let u = zeta * delta;
    if u.norm() < TAYLOR_SWITCH {
        delta * (1.0 - u * u / 6.0)
    } else {
        u.sin() / zeta
    }
}

/// Free continuation of Cauchy data `(c, d)` at `x0` to `x`: value and derivative.
pub fn free_continuation(zeta: C64, x0: f64, c: C64, d: C64, x: f64) -> (C64, C64) {
    let dx = x - x0;
    let arg = zeta * dx;
    let (s, co) = (arg.sin(), arg.cos());
    (c * co + d * sine_kernel(zeta, dx), -c * zeta * s + d * co)
}

/// Wronskian `f g' - f' g` of two (value, derivative) pairs.
pub fn wronskian(f: (C64, C64), g: (C64, C64)) -> C64 {
    f.0 * g.1 - f.1 * g.0
}

/// Convergence record of a Picard iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardDiagnostics {
    pub iterations: usize,
    /// Sup norm of each Picard term, the zeroth term first.
    pub term_sup_norms: Vec<f64>,
    pub converged: bool,
    /// Sup norm of the Volterra residual of the returned solution.
    pub residual: f64,
    /// Bound on the kernel modulus used in the term estimate `(C ||V||_1)^n / n!`.
    pub kernel_bound: f64,
}

/// Jost solution with value and derivative tables over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JostSolution {
    pub side: Side,
    pub zeta: C64,
    pub chi: WaveFunction,
    pub chi_prime: WaveFunction,
}

impl JostSolution {
    fn phase(&self, x: f64) -> C64 {
        match self.side {
            Side::Right => (-I * self.zeta * x).exp(),
            Side::Left => (I * self.zeta * x).exp(),
        }
    }

    /// Rescaled table `b± = e^{∓iζx} χ±`.
    pub fn b_rescaled(&self) -> WaveFunction {
        self.chi.map(|x, c| self.phase(x) * c)
    }

    /// Derivative of the rescaled table.
    pub fn b_rescaled_prime(&self) -> WaveFunction {
        let s = match self.side {
            Side::Right => -I * self.zeta,
            Side::Left => I * self.zeta,
        };
        let scaled = self.chi.zip_map(&self.chi_prime, |c, d| d + s * c);
        scaled.map(|x, v| self.phase(x) * v)
    }

    /// `(χ(a), χ'(a))`.
    pub fn trace_a(&self) -> (C64, C64) {
        (self.chi.a_plus(), self.chi_prime.a_plus())
    }

    /// `(χ(b), χ'(b))`.
    pub fn trace_b(&self) -> (C64, C64) {
        (self.chi.b_minus(), self.chi_prime.b_minus())
    }

    /// Value and derivative at an arbitrary point: closed form outside `[a, b]`,
    /// cubic Hermite interpolation of the tables inside.
    pub fn eval(&self, x: f64, v: &Potential) -> (C64, C64) {
        let g = self.chi.grid();
        let z = self.zeta;
        if x <= g.a() {
            match self.side {
                Side::Left => {
                    let e = (-I * z * x).exp();
                    (e, -I * z * e)
                }
                Side::Right => {
                    let (c, d) = self.trace_a();
                    free_continuation(z, g.a(), c, d, x)
                }
            }
        } else if x >= g.b() {
            match self.side {
                Side::Right => {
                    let e = (I * z * x).exp();
                    (e, I * z * e)
                }
                Side::Left => {
                    let (c, d) = self.trace_b();
                    free_continuation(z, g.b(), c, d, x)
                }
            }
        } else {
            let h = g.spacing(INNER);
            let n = g.count(INNER);
            let m = (((x - g.a()) / h).floor() as usize).min(n - 2);
            let t = (x - g.x(INNER, m)) / h;
            let f0 = self.chi.at(INNER, m);
            let f1 = self.chi.at(INNER, m + 1);
            let d0 = self.chi_prime.at(INNER, m);
            let d1 = self.chi_prime.at(INNER, m + 1);
            let s0 = (v.at(INNER, m) - z * z) * f0;
            let s1 = (v.at(INNER, m + 1) - z * z) * f1;
            (hermite(f0, d0, f1, d1, h, t).0, hermite(d0, s0, d1, s1, h, t).0)
        }
    }
}

fn hermite(f0: C64, d0: C64, f1: C64, d1: C64, h: f64, t: f64) -> (C64, C64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let value = f0 * h00 + d0 * (h * h10) + f1 * h01 + d1 * (h * h11);
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -6.0 * t2 + 6.0 * t;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let deriv = (f0 * dh00 + f1 * dh01) / h + d0 * dh10 + d1 * dh11;
    (value, deriv)
}

/// Inner-segment potential ordered by distance from the starting interface.
fn march_order(side: Side, inner: &[f64]) -> Vec<f64> {
    match side {
        Side::Right => inner.iter().rev().copied().collect(),
        Side::Left => inner.to_vec(),
    }
}

/// Dense lower-triangular Volterra operator `(Ax)_i = ∫_0^{s_i} k(s_i - σ) u(σ) x(σ) dσ`.
fn volterra_matrix(u: &[f64], h: f64, kernel: impl Fn(f64) -> C64) -> Vec<C64> {
    let n = u.len();
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for i in 1..n {
        let si = i as f64 * h;
        for (j, w) in prefix_rule(i) {
            if u[j] != 0.0 {
                a[i * n + j] += kernel(si - j as f64 * h) * (w * h * u[j]);
            }
        }
    }
    a
}

fn matvec(a: &[C64], x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n).map(|i| a[i * n..(i + 1) * n].iter().zip(x).map(|(aij, xj)| aij * xj).sum()).collect()
}

fn sup(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Iterates `x = f + A x` until the increment drops below `tol * max(1, sup|x|)`.
fn picard_iterate(a: &[C64], free: &[C64], tol: f64, max_iter: usize) -> Result<(Vec<C64>, PicardDiagnostics)> {
    let mut x = free.to_vec();
    let mut terms = vec![sup(free)];
    let mut inc = f64::INFINITY;
    for it in 1..=max_iter {
        let ax = matvec(a, &x);
        let next: Vec<C64> = free.iter().zip(&ax).map(|(f, v)| f + v).collect();
        inc = x.iter().zip(&next).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        terms.push(inc);
        x = next;
        if inc <= tol * sup(&x).max(1.0) {
            let ax = matvec(a, &x);
            let residual =
                x.iter().zip(free).zip(&ax).map(|((xi, fi), ai)| (xi - fi - ai).norm()).fold(0.0, f64::max);
            let diag = PicardDiagnostics {
                iterations: it,
                term_sup_norms: terms,
                converged: true,
                residual,
                kernel_bound: 0.0,
            };
            return Ok((x, diag));
        }
    }
    Err(ScatterError::NoConvergence { iterations: max_iter, last_increment: inc })
}

fn check_inputs(zeta: C64, v: &Potential) -> Result<()> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) || zeta.im < 0.0 {
        return Err(ScatterError::Config(format!("Jost solutions need Im ζ >= 0, got {zeta}")));
    }
    if v.grid().count(INNER) < 5 {
        return Err(ScatterError::Config("the inner segment needs at least 5 nodes".into()));
    }
    Ok(())
}

/// Fills the exterior segments from the inner tables.
fn assemble(side: Side, zeta: C64, grid: SpatialGrid, inner: Vec<C64>, inner_prime: Vec<C64>) -> JostSolution {
    let (ca, da) = (inner[0], inner_prime[0]);
    let (cb, db) = (*inner.last().expect("inner"), *inner_prime.last().expect("inner"));
    let exterior = |seg: usize| -> (Vec<C64>, Vec<C64>) {
        grid.nodes(seg)
            .into_iter()
            .map(|x| match (side, seg) {
                (Side::Right, RIGHT) => {
                    let e = (I * zeta * x).exp();
                    (e, I * zeta * e)
                }
                (Side::Left, LEFT) => {
                    let e = (-I * zeta * x).exp();
                    (e, -I * zeta * e)
                }
                (_, LEFT) => free_continuation(zeta, grid.a(), ca, da, x),
                _ => free_continuation(zeta, grid.b(), cb, db, x),
            })
            .unzip()
    };
    let (l, lp) = exterior(LEFT);
    let (r, rp) = exterior(RIGHT);
    JostSolution {
        side,
        zeta,
        chi: WaveFunction::new(grid, [l, inner, r]).expect("consistent lengths"),
        chi_prime: WaveFunction::new(grid, [lp, inner_prime, rp]).expect("consistent lengths"),
    }
}

/// Jost solution by Picard iteration of the rescaled Volterra equation.
pub fn picard_jost(
    side: Side,
    zeta: C64,
    v: &Potential,
    tol: f64,
    max_iter: usize,
) -> Result<(JostSolution, PicardDiagnostics)> {
    check_inputs(zeta, v)?;
    if !(tol > 0.0) {
        return Err(ScatterError::Config("Picard tolerance must be positive".into()));
    }
    let grid = *v.grid();
    let n = grid.count(INNER);
    let h = grid.spacing(INNER);
    let u = march_order(side, v.inner_values());
    let a = volterra_matrix(&u, h, |d| rescaled_kernel(zeta, d));
    let (beta, mut diag) = picard_iterate(&a, &vec![C64::new(1.0, 0.0); n], tol, max_iter)?;
    diag.kernel_bound = grid.b() - grid.a();
    let d = volterra_matrix(&u, h, |d| (I * zeta * (2.0 * d)).exp());
    let beta_s = matvec(&d, &beta);
    let mut inner = vec![C64::new(0.0, 0.0); n];
    let mut inner_prime = vec![C64::new(0.0, 0.0); n];
    for m in 0..n {
        let x = grid.x(INNER, m);
        match side {
            Side::Right => {
                let s = n - 1 - m;
                let e = (I * zeta * x).exp();
                inner[m] = e * beta[s];
                inner_prime[m] = e * (I * zeta * beta[s] - beta_s[s]);
            }
            Side::Left => {
                let e = (-I * zeta * x).exp();
                inner[m] = e * beta[m];
                inner_prime[m] = e * (-I * zeta * beta[m] + beta_s[m]);
            }
        }
    }
    Ok((assemble(side, zeta, grid, inner, inner_prime), diag))
}

/// Jost solution with the default Picard settings.
pub fn jost_solution(side: Side, zeta: C64, v: &Potential) -> Result<JostSolution> {
    picard_jost(side, zeta, v, PICARD_TOL, PICARD_MAX_ITER).map(|(s, _)| s)
}

/// Four-point Lagrange interpolation of node samples at `j + t`, `t` in `[0, 1]`.
fn interpolate(u: &[f64], j: usize, t: f64) -> f64 {
    let n = u.len();
    let base = j.saturating_sub(1).min(n - 4);
    let x = (j - base) as f64 + t;
    (0..4)
        .map(|m| {
            let weight: f64 =
                (0..4).filter(|&l| l != m).map(|l| (x - l as f64) / (m as f64 - l as f64)).product();
            weight * u[base + m]
        })
        .sum()
}

/// Independent Jost solution: classical Runge-Kutta march of `u'' = (V - ζ²) u`
/// from the exterior data at the starting interface, with [`ORACLE_SUBSTEPS`] steps per
/// grid spacing.
pub fn ode_jost_oracle(side: Side, zeta: C64, v: &Potential) -> Result<JostSolution> {
    check_inputs(zeta, v)?;
    let grid = *v.grid();
    let n = grid.count(INNER);
    let h = grid.spacing(INNER);
    if h <= f64::EPSILON * (grid.b() - grid.a()) {
        return Err(ScatterError::StepUnderflow);
    }
    let u = march_order(side, v.inner_values());
    let z2 = zeta * zeta;
    let f = |pot: f64, y: (C64, C64)| (y.1, (pot - z2) * y.0);
    let start = match side {
        Side::Right => (I * zeta * grid.b()).exp(),
        Side::Left => (-I * zeta * grid.a()).exp(),
    };
    let dt = 1.0 / ORACLE_SUBSTEPS as f64;
    let k = h * dt;
    let mut y = (start, -I * zeta * start);
    let mut path = Vec::with_capacity(n);
    path.push(y);
    for j in 0..n - 1 {
        for sub in 0..ORACLE_SUBSTEPS {
            let t0 = sub as f64 * dt;
            let (v0, vm, v1) =
                (interpolate(&u, j, t0), interpolate(&u, j, t0 + 0.5 * dt), interpolate(&u, j, t0 + dt));
            let k1 = f(v0, y);
            let k2 = f(vm, (y.0 + k1.0 * (k / 2.0), y.1 + k1.1 * (k / 2.0)));
            let k3 = f(vm, (y.0 + k2.0 * (k / 2.0), y.1 + k2.1 * (k / 2.0)));
            let k4 = f(v1, (y.0 + k3.0 * k, y.1 + k3.1 * k));
            y = (
                y.0 + (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (k / 6.0),
                y.1 + (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (k / 6.0),
            );
        }
        path.push(y);
    }
    let (inner, inner_prime): (Vec<C64>, Vec<C64>) = match side {
        Side::Right => path.iter().rev().map(|&(a, b)| (a, -b)).unzip(),
        Side::Left => path.into_iter().unzip(),
    };
    Ok(assemble(side, zeta, grid, inner, inner_prime))
}

/// Wronskian `f g' - f' g` at `a`, checked against its values at the middle of the
/// support and at `b`.
pub fn checked_wronskian(f: &JostSolution, g: &JostSolution) -> Result<C64> {
    let n = f.chi.grid().count(INNER);
    let at = |m: usize| {
        wronskian(
            (f.chi.at(INNER, m), f.chi_prime.at(INNER, m)),
            (g.chi.at(INNER, m), g.chi_prime.at(INNER, m)),
        )
    };
    let w = at(0);
    let spread = [n / 2, n - 1].iter().map(|&m| (at(m) - w).norm()).fold(0.0, f64::max);
    let limit = WRONSKIAN_SPREAD * (1.0 + w.norm());
    if spread > limit {
        return Err(ScatterError::Accuracy { what: "Wronskian spread", value: spread, limit });
    }
    Ok(w)
}

/// Closed form `w = -b+'(a) - 2iζ b+(a)` from the rescaled right solution.
pub fn wronskian_from_rescaled(b_plus_a: C64, b_plus_prime_a: C64, zeta: C64) -> C64 {
    -b_plus_prime_a - 2.0 * I * zeta * b_plus_a
}

/// Traces of both Jost solutions at the interfaces, with `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostTraces {
    pub zeta: C64,
    pub w: C64,
    /// `(χ+(a), χ+'(a))`
    pub plus_a: (C64, C64),
    pub plus_b: (C64, C64),
    /// `(χ-(a), χ-'(a))`
    pub minus_a: (C64, C64),
    pub minus_b: (C64, C64),
}

/// Both Jost solutions at one spectral parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct JostPair {
    pub zeta: C64,
    pub plus: JostSolution,
    pub minus: JostSolution,
    /// `w(ζ) = χ+ χ-' - χ+' χ-`
    pub w: C64,
}

impl JostPair {
    pub fn new(zeta: C64, v: &Potential) -> Result<Self> {
        let plus = jost_solution(Side::Right, zeta, v)?;
        let minus = jost_solution(Side::Left, zeta, v)?;
        let w = checked_wronskian(&plus, &minus)?;
        Ok(Self { zeta, plus, minus, w })
    }

    pub fn traces(&self) -> JostTraces {
        JostTraces {
            zeta: self.zeta,
            w: self.w,
            plus_a: self.plus.trace_a(),
            plus_b: self.plus.trace_b(),
            minus_a: self.minus.trace_a(),
            minus_b: self.minus.trace_b(),
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        self.plus.chi.grid()
    }
}

/// Jost function `w(ζ)`.
pub fn jost_wronskian(zeta: C64, v: &Potential) -> Result<C64> {
    Ok(JostPair::new(zeta, v)?.w)
}

/// `w0(k)`: Wronskian of `χ+(·, -k)` and `χ-(·, k)` for real `k`.
pub fn jost_wronskian_w0(k: f64, v: &Potential) -> Result<C64> {
    let plus = jost_solution(Side::Right, C64::new(-k, 0.0), v)?;
    let minus = jost_solution(Side::Left, C64::new(k, 0.0), v)?;
    checked_wronskian(&plus, &minus)
}

/// Solution of `-u'' + V u = ζ² u` across `[a, b]` from Cauchy data at `a`;
/// returns `(u(b), u'(b))`.
pub fn march_inner(zeta: C64, v: &Potential, u_a: C64, du_a: C64) -> Result<(C64, C64)> {
    check_inputs(zeta, v)?;
    let grid = v.grid();
    let n = grid.count(INNER);
    let h = grid.spacing(INNER);
    let u = v.inner_values();
    let s: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let free: Vec<C64> =
        s.iter().map(|&si| u_a * (zeta * si).cos() + du_a * sine_kernel(zeta, si)).collect();
    let free_prime: Vec<C64> =
        s.iter().map(|&si| -u_a * zeta * (zeta * si).sin() + du_a * (zeta * si).cos()).collect();
    let a = volterra_matrix(u, h, |d| sine_kernel(zeta, d));
    let (sol, _) = picard_iterate(&a, &free, PICARD_TOL, CAUCHY_MAX_ITER)?;
    let d = volterra_matrix(u, h, |d| (zeta * d).cos());
    let last = &d[(n - 1) * n..];
    let deriv = free_prime[n - 1] + last.iter().zip(&sol).map(|(a, b)| a * b).sum::<C64>();
    Ok((sol[n - 1], deriv))
}
