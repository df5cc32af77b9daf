//! Fourth-order finite differences, one-sided near segment ends.

use super::grid::WaveFunction;
use crate::{Result, ScatterError, C64};

const D1_EDGE: [[f64; 5]; 2] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
];
const D1_CENTER: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

const D2_EDGE: [[f64; 6]; 2] = [
    [45.0, -154.0, 214.0, -156.0, 61.0, -10.0],
    [10.0, -15.0, -4.0, 14.0, -6.0, 1.0],
];
const D2_CENTER: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

fn dot(c: &[f64], f: &[C64]) -> C64 {
    c.iter().zip(f).map(|(ci, fi)| fi * *ci).sum()
}

fn dot_reversed(c: &[f64], f: &[C64]) -> C64 {
    c.iter().zip(f.iter().rev()).map(|(ci, fi)| fi * *ci).sum()
}

/// First derivative at every node of one segment (needs at least 5 nodes).
pub fn first_derivative(f: &[C64], h: f64) -> Result<Vec<C64>> {
    let n = f.len();
    if n < 5 {
        return Err(ScatterError::Config(format!("first-derivative stencil needs 5 nodes, got {n}")));
    }
    let s = 1.0 / (12.0 * h);
    let mut out = vec![C64::new(0.0, 0.0); n];
    out[0] = dot(&D1_EDGE[0], &f[..5]) * s;
    out[1] = dot(&D1_EDGE[1], &f[..5]) * s;
    for i in 2..n - 2 {
        out[i] = dot(&D1_CENTER, &f[i - 2..i + 3]) * s;
    }
    out[n - 1] = -dot_reversed(&D1_EDGE[0], &f[n - 5..]) * s;
    out[n - 2] = -dot_reversed(&D1_EDGE[1], &f[n - 5..]) * s;
    Ok(out)
}

/// Second derivative at every node of one segment (needs at least 6 nodes).
pub fn second_derivative(f: &[C64], h: f64) -> Result<Vec<C64>> {
    let n = f.len();
    if n < 6 {
        return Err(ScatterError::Config(format!("second-derivative stencil needs 6 nodes, got {n}")));
    }
    let s = 1.0 / (12.0 * h * h);
    let mut out = vec![C64::new(0.0, 0.0); n];
    out[0] = dot(&D2_EDGE[0], &f[..6]) * s;
    out[1] = dot(&D2_EDGE[1], &f[..6]) * s;
    for i in 2..n - 2 {
        out[i] = dot(&D2_CENTER, &f[i - 2..i + 3]) * s;
    }
    out[n - 1] = dot_reversed(&D2_EDGE[0], &f[n - 6..]) * s;
    out[n - 2] = dot_reversed(&D2_EDGE[1], &f[n - 6..]) * s;
    Ok(out)
}

/// One-sided derivative at the first node of a segment.
pub fn derivative_at_start(f: &[C64], h: f64) -> Result<C64> {
    if f.len() < 5 {
        return Err(ScatterError::Config("derivative trace needs 5 nodes per segment".into()));
    }
    Ok(dot(&D1_EDGE[0], &f[..5]) / (12.0 * h))
}

/// One-sided derivative at the last node of a segment.
pub fn derivative_at_end(f: &[C64], h: f64) -> Result<C64> {
    let n = f.len();
    if n < 5 {
        return Err(ScatterError::Config("derivative trace needs 5 nodes per segment".into()));
    }
    Ok(-dot_reversed(&D1_EDGE[0], &f[n - 5..]) / (12.0 * h))
}

/// Segment-wise first derivative of a wave function.
pub fn derivative(u: &WaveFunction) -> Result<WaveFunction> {
    let g = *u.grid();
    let segs = [
        first_derivative(u.segment(0), g.spacing(0))?,
        first_derivative(u.segment(1), g.spacing(1))?,
        first_derivative(u.segment(2), g.spacing(2))?,
    ];
    WaveFunction::new(g, segs)
}

/// Segment-wise second derivative of a wave function.
pub fn second(u: &WaveFunction) -> Result<WaveFunction> {
    let g = *u.grid();
    let segs = [
        second_derivative(u.segment(0), g.spacing(0))?,
        second_derivative(u.segment(1), g.spacing(1))?,
        second_derivative(u.segment(2), g.spacing(2))?,
    ];
    WaveFunction::new(g, segs)
}
