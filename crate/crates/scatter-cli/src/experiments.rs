//! One function per experiment; each writes its tables into the artifact set.

use rayon::prelude::*;
use serde::Serialize;

use scatter_core::eigen::{pde_residual, psi_minus_theta};
use scatter_core::evolve::{
    build_wave_operator, gaussian_packet, intertwining_residual, propagate_free, propagate_theta, remainder_norm,
    wave_limit_deviation, SpectralBasis, WaveOperator, NEUMANN_ORDER,
};
use scatter_core::jost::{jost_wronskian, jost_wronskian_w0};
use scatter_core::krein::{eigenvalue_track, spectral_scan, Region, ThetaPair};
use scatter_core::numerics::SpatialGrid;
use scatter_core::potential::{build_potential, Potential};
use scatter_core::C64;

use crate::config::{RunConfig, SweepQuantity};
use crate::error::CliError;
use crate::fit::{log_slope, SlopeFit};
use crate::output::{Artifacts, Cell};

fn setup(cfg: &RunConfig) -> Result<(SpatialGrid, Potential), CliError> {
    let grid = cfg.grid.build()?;
    let spec = cfg.potential.as_ref().ok_or_else(|| CliError::Validation("missing potential block".into()))?;
    Ok((grid, build_potential(spec, &grid)?))
}

fn thetas(cfg: &RunConfig) -> Vec<ThetaPair> {
    cfg.theta.as_ref().map(|t| t.pairs()).unwrap_or_else(|| vec![ThetaPair::zero()])
}

fn theta_cells(t: ThetaPair) -> Vec<Cell> {
    vec![t.theta1.re.into(), t.theta1.im.into(), t.theta2.re.into(), t.theta2.im.into()]
}

const THETA_COLUMNS: [&str; 4] = ["theta1_re", "theta1_im", "theta2_re", "theta2_im"];

fn with_theta_columns(rest: &[&'static str]) -> Vec<&'static str> {
    THETA_COLUMNS.iter().chain(rest).copied().collect()
}

#[derive(Serialize)]
struct JostReport {
    max_relative_error: f64,
    tolerance: f64,
    pass: bool,
}

pub fn jost(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let (_, v) = setup(cfg)?;
    let rows: Vec<(f64, C64, C64)> = cfg
        .jost
        .k_values
        .par_iter()
        .map(|&k| Ok((k, jost_wronskian(C64::new(k, 0.0), &v)?, jost_wronskian_w0(k, &v)?)))
        .collect::<Result<_, CliError>>()?;
    let mut worst: f64 = 0.0;
    let table: Vec<Vec<Cell>> = rows
        .iter()
        .map(|&(k, w, w0)| {
            let lhs = w.norm_sqr() - w0.norm_sqr();
            let rhs = 4.0 * k * k;
            let rel = (lhs - rhs).abs() / rhs;
            worst = worst.max(rel);
            vec![k.into(), w.re.into(), w.im.into(), w0.re.into(), w0.im.into(), lhs.into(), rhs.into(), rel.into()]
        })
        .collect();
    out.csv("jost.csv", &["k", "w_re", "w_im", "w0_re", "w0_im", "identity_lhs", "identity_rhs", "relative_error"], &table)?;
    let tol = cfg.tolerances.wronskian;
    out.json("jost_report.json", &JostReport { max_relative_error: worst, tolerance: tol, pass: worst < tol })
}

#[derive(Serialize)]
struct TrackRecord {
    theta: ThetaPair,
    energy: C64,
    shift: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    scans: Vec<(ThetaPair, Vec<C64>)>,
    track_start: Option<f64>,
    track: Vec<TrackRecord>,
}

pub fn spectrum(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let (_, v) = setup(cfg)?;
    let s = &cfg.spectrum;
    let region = Region::new(s.region[0], s.region[1], s.region[2], s.region[3])?;
    let mut rows = Vec::new();
    let mut scans = Vec::new();
    for theta in thetas(cfg) {
        let scan = spectral_scan(region, (s.resolution[0], s.resolution[1]), theta, &v)?;
        for p in &scan.points {
            let mut row = theta_cells(theta);
            row.extend([p.z.re.into(), p.z.im.into(), p.det_m.norm().into(), p.d.norm().into()]);
            rows.push(row);
        }
        scans.push((theta, scan.candidates));
    }
    out.csv("spectrum_scan.csv", &with_theta_columns(&["z_re", "z_im", "abs_det_m", "abs_scan_function"]), &rows)?;
    let mut track = Vec::new();
    if let Some(e0) = s.track {
        let base = eigenvalue_track(e0, ThetaPair::zero(), &v, 1e-13)?;
        for theta in thetas(cfg) {
            let energy = eigenvalue_track(base.re, theta, &v, 1e-13)?;
            track.push(TrackRecord { theta, energy, shift: (energy - base).norm() });
        }
    }
    out.json("spectrum.json", &SpectrumReport { scans, track_start: s.track, track })
}

pub fn eigenfun(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let (grid, v) = setup(cfg)?;
    let theta = thetas(cfg)[0];
    let states = cfg
        .eigenfun
        .k_values
        .par_iter()
        .map(|&k| {
            let psi = psi_minus_theta(k, theta, &v)?;
            let pde = pde_residual(&psi.values, &psi.derivative, C64::new(k * k, 0.0), &v)?;
            Ok((psi, pde))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows: Vec<Vec<Cell>> = states
        .iter()
        .map(|(psi, pde)| {
            vec![
                psi.k.into(),
                psi.r.re.into(),
                psi.r.im.into(),
                psi.t.re.into(),
                psi.t.im.into(),
                psi.flux().into(),
                psi.interface_residuals().max().into(),
                (*pde).into(),
                psi.fit_residual.into(),
            ]
        })
        .collect();
    out.csv(
        "scattering.csv",
        &["k", "r_re", "r_im", "t_re", "t_im", "flux", "interface_residual", "pde_residual", "fit_residual"],
        &rows,
    )?;
    if cfg.eigenfun.tables {
        let xs = grid.flat_positions();
        for (i, (psi, _)) in states.iter().enumerate() {
            let vals = psi.values.to_flat();
            let ders = psi.derivative.to_flat();
            let rows: Vec<Vec<Cell>> = (0..xs.len())
                .map(|n| vec![xs[n].into(), vals[n].re.into(), vals[n].im.into(), ders[n].re.into(), ders[n].im.into()])
                .collect();
            out.csv(&format!("eigenfunction_{i:03}.csv"), &["x", "psi_re", "psi_im", "dpsi_re", "dpsi_im"], &rows)?;
        }
    }
    Ok(())
}

fn basis(cfg: &RunConfig) -> Result<SpectralBasis, CliError> {
    let (_, v) = setup(cfg)?;
    Ok(SpectralBasis::new(&v, cfg.spectral)?)
}

fn operators(b: &SpectralBasis, pairs: &[ThetaPair]) -> Result<Vec<WaveOperator>, CliError> {
    pairs.iter().map(|&t| build_wave_operator(b, t).map_err(CliError::from)).collect()
}

pub fn waveop(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let b = basis(cfg)?;
    let pairs = thetas(cfg);
    let ops = operators(&b, &pairs)?;
    let p = cfg.propagate.packet;
    let phi = gaussian_packet(b.grid(), p.x0, p.sigma, p.k0);
    let mut rows = Vec::new();
    for (theta, w) in pairs.iter().zip(&ops) {
        let mut row = theta_cells(*theta);
        row.extend([
            theta.size().into(),
            w.deviation.into(),
            w.solve_residual.into(),
            w.neumann_discrepancy(NEUMANN_ORDER).into(),
            intertwining_residual(&b, w, &phi)?.into(),
        ]);
        rows.push(row);
    }
    out.csv(
        "waveop.csv",
        &with_theta_columns(&["theta_size", "deviation", "solve_residual", "neumann_discrepancy", "intertwining_residual"]),
        &rows,
    )?;
    if pairs.len() >= 2 {
        let sizes: Vec<f64> = pairs.iter().map(|t| t.size()).collect();
        let devs: Vec<f64> = ops.iter().map(|w| w.deviation).collect();
        out.json("waveop_fit.json", &log_slope(&sizes, &devs))?;
    }
    Ok(())
}

pub fn propagate(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let b = basis(cfg)?;
    let theta = thetas(cfg)[0];
    let w = build_wave_operator(&b, theta)?;
    let p = cfg.propagate.packet;
    let phi = gaussian_packet(b.grid(), p.x0, p.sigma, p.k0);
    let mut rows = Vec::new();
    for &t in &cfg.propagate.times {
        let free = propagate_free(&b, &phi, t)?;
        let pert = propagate_theta(&b, &w, &phi, t)?;
        rows.push(vec![
            t.into(),
            remainder_norm(&b.nodes, &w, t).into(),
            free.norm().into(),
            pert.norm().into(),
            pert.sub(&free).norm().into(),
            wave_limit_deviation(&b, &w, &phi, t)?.into(),
        ]);
    }
    out.csv(
        "propagate.csv",
        &["t", "remainder_norm", "free_norm", "perturbed_norm", "packet_difference", "wave_limit_deviation"],
        &rows,
    )
}

#[derive(Serialize)]
struct SweepReport {
    quantity: SweepQuantity,
    time: Option<f64>,
    sizes: Vec<f64>,
    values: Vec<f64>,
    fit: SlopeFit,
}

pub fn sweep(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let pairs = thetas(cfg);
    let sizes: Vec<f64> = pairs.iter().map(|t| t.size()).collect();
    let quantity = cfg.sweep.quantity;
    let values: Vec<f64> = match quantity {
        SweepQuantity::WaveDeviation | SweepQuantity::Remainder => {
            let b = basis(cfg)?;
            let mut vals = Vec::with_capacity(pairs.len());
            for &theta in &pairs {
                let w = build_wave_operator(&b, theta)?;
                vals.push(if quantity == SweepQuantity::Remainder {
                    remainder_norm(&b.nodes, &w, cfg.sweep.time)
                } else {
                    w.deviation
                });
            }
            vals
        }
        SweepQuantity::EigenvalueShift => {
            let (_, v) = setup(cfg)?;
            let e0 = cfg.spectrum.track.ok_or_else(|| CliError::Validation("missing spectrum.track".into()))?;
            let base = eigenvalue_track(e0, ThetaPair::zero(), &v, 1e-13)?;
            pairs
                .par_iter()
                .map(|&t| Ok((eigenvalue_track(base.re, t, &v, 1e-13)? - base).norm()))
                .collect::<Result<_, CliError>>()?
        }
    };
    let rows: Vec<Vec<Cell>> = pairs
        .iter()
        .zip(&values)
        .map(|(t, v)| {
            let mut row = theta_cells(*t);
            row.extend([t.size().into(), (*v).into()]);
            row
        })
        .collect();
    out.csv("sweep.csv", &with_theta_columns(&["theta_size", "value"]), &rows)?;
    let fit = log_slope(&sizes, &values);
    let time = (quantity == SweepQuantity::Remainder).then_some(cfg.sweep.time);
    out.json("sweep_fit.json", &SweepReport { quantity, time, sizes, values, fit })
}
