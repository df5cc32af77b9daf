//! Segmented spatial grid with duplicated interface nodes and complex sample tables.

use serde::{Deserialize, Serialize};

use super::quad;
use crate::{Result, ScatterError, C64};

/// Segment `[x_min, a]`.
pub const LEFT: usize = 0;
/// Segment `[a, b]` carrying the potential.
pub const INNER: usize = 1;
/// Segment `[b, x_max]`.
pub const RIGHT: usize = 2;

/// Three uniform segments `[x_min, a]`, `[a, b]`, `[b, x_max]`.
///
/// Each segment stores its own endpoint nodes, so the one-sided limits
/// `u(a-)`, `u(a+)`, `u(b-)`, `u(b+)` are plain node reads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    x_min: f64,
    a: f64,
    b: f64,
    x_max: f64,
    counts: [usize; 3],
}

impl SpatialGrid {
    pub fn new(x_min: f64, a: f64, b: f64, x_max: f64, counts: [usize; 3]) -> Result<Self> {
        if ![x_min, a, b, x_max].iter().all(|v| v.is_finite()) {
            return Err(ScatterError::Config("grid bounds must be finite".into()));
        }
        if !(x_min < a && a < b && b < x_max) {
            return Err(ScatterError::Config(format!(
                "grid bounds must satisfy x_min < a < b < x_max, got {x_min}, {a}, {b}, {x_max}"
            )));
        }
        for (s, &n) in counts.iter().enumerate() {
            if n < 3 || n % 2 == 0 {
                return Err(ScatterError::Config(format!(
                    "segment {s} needs an odd node count >= 3, got {n}"
                )));
            }
        }
        Ok(Self { x_min, a, b, x_max, counts })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn bounds(&self, seg: usize) -> (f64, f64) {
        match seg {
            LEFT => (self.x_min, self.a),
            INNER => (self.a, self.b),
            _ => (self.b, self.x_max),
        }
    }

    pub fn count(&self, seg: usize) -> usize {
        self.counts[seg]
    }

    pub fn spacing(&self, seg: usize) -> f64 {
        let (lo, hi) = self.bounds(seg);
        (hi - lo) / (self.counts[seg] - 1) as f64
    }

    /// Node position; segment endpoints are returned exactly.
    pub fn x(&self, seg: usize, i: usize) -> f64 {
        let (lo, hi) = self.bounds(seg);
        if i + 1 == self.counts[seg] {
            hi
        } else {
            lo + i as f64 * self.spacing(seg)
        }
    }

    pub fn nodes(&self, seg: usize) -> Vec<f64> {
        (0..self.counts[seg]).map(|i| self.x(seg, i)).collect()
    }

    /// Total node count, interface nodes counted once per segment.
    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Offset of a segment in the flattened node ordering.
    pub fn offset(&self, seg: usize) -> usize {
        self.counts[..seg].iter().sum()
    }

    /// Grid with every segment spacing halved.
    pub fn refined(&self) -> Self {
        let c = self.counts;
        Self { counts: [2 * c[0] - 1, 2 * c[1] - 1, 2 * c[2] - 1], ..*self }
    }

    /// Flattened node positions (segment order, interface nodes duplicated).
    pub fn flat_positions(&self) -> Vec<f64> {
        (0..3).flat_map(|s| self.nodes(s)).collect()
    }

    /// Flattened Simpson weights: `∫ f dx ≈ Σ w_n f_n` over the whole grid.
    pub fn flat_weights(&self) -> Vec<f64> {
        (0..3)
            .flat_map(|s| {
                let h = self.spacing(s);
                quad::simpson_weights(self.counts[s])
                    .expect("validated odd count")
                    .into_iter()
                    .map(move |w| w * h)
            })
            .collect()
    }
}

/// Complex samples over a [`SpatialGrid`], one table per segment.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: SpatialGrid,
    segs: [Vec<C64>; 3],
}

impl WaveFunction {
    pub fn new(grid: SpatialGrid, segs: [Vec<C64>; 3]) -> Result<Self> {
        for (s, seg) in segs.iter().enumerate() {
            if seg.len() != grid.count(s) {
                return Err(ScatterError::Length { expected: grid.count(s), got: seg.len() });
            }
            if seg.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(ScatterError::NonFinite("wave function"));
            }
        }
        Ok(Self { grid, segs })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        let segs = [0, 1, 2].map(|s| vec![C64::new(0.0, 0.0); grid.count(s)]);
        Self { grid, segs }
    }

    /// Samples a function that is continuous across the interfaces.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> C64) -> Self {
        Self::from_segment_fn(grid, |_, x| f(x))
    }

    /// Samples a piecewise function given per segment.
    pub fn from_segment_fn(grid: SpatialGrid, f: impl Fn(usize, f64) -> C64) -> Self {
        let segs = [0, 1, 2].map(|s| grid.nodes(s).into_iter().map(|x| f(s, x)).collect());
        Self { grid, segs }
    }

    pub fn from_flat(grid: SpatialGrid, flat: &[C64]) -> Result<Self> {
        if flat.len() != grid.len() {
            return Err(ScatterError::Length { expected: grid.len(), got: flat.len() });
        }
        let o1 = grid.offset(1);
        let o2 = grid.offset(2);
        Self::new(grid, [flat[..o1].to_vec(), flat[o1..o2].to_vec(), flat[o2..].to_vec()])
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn segment(&self, seg: usize) -> &[C64] {
        &self.segs[seg]
    }

    pub fn segment_mut(&mut self, seg: usize) -> &mut [C64] {
        &mut self.segs[seg]
    }

    pub fn at(&self, seg: usize, i: usize) -> C64 {
        self.segs[seg][i]
    }

    pub fn to_flat(&self) -> Vec<C64> {
        self.segs.iter().flatten().copied().collect()
    }

    pub fn a_minus(&self) -> C64 {
        *self.segs[LEFT].last().expect("non-empty")
    }
    pub fn a_plus(&self) -> C64 {
        self.segs[INNER][0]
    }
    pub fn b_minus(&self) -> C64 {
        *self.segs[INNER].last().expect("non-empty")
    }
    pub fn b_plus(&self) -> C64 {
        self.segs[RIGHT][0]
    }

    /// `∫ u dx` over the grid, Simpson per segment.
    pub fn integral(&self) -> C64 {
        (0..3)
            .map(|s| quad::quadrature(&self.segs[s], self.grid.spacing(s)).expect("validated grid"))
            .sum()
    }

    /// `⟨self, other⟩ = ∫ conj(self) other dx`.
    pub fn inner(&self, other: &WaveFunction) -> C64 {
        self.zip_map(other, |u, v| u.conj() * v).integral()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.segs.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let segs = [0, 1, 2].map(|s| {
            self.segs[s].iter().enumerate().map(|(i, v)| f(self.grid.x(s, i), *v)).collect()
        });
        Self { grid: self.grid, segs }
    }

    pub fn zip_map(&self, other: &WaveFunction, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.grid, other.grid, "wave functions live on different grids");
        let segs = [0, 1, 2]
            .map(|s| self.segs[s].iter().zip(&other.segs[s]).map(|(u, v)| f(*u, *v)).collect());
        Self { grid: self.grid, segs }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn sub(&self, other: &WaveFunction) -> Self {
        self.zip_map(other, |u, v| u - v)
    }

    pub fn add(&self, other: &WaveFunction) -> Self {
        self.zip_map(other, |u, v| u + v)
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: C64, other: &WaveFunction) {
        assert_eq!(self.grid, other.grid, "wave functions live on different grids");
        for s in 0..3 {
            for (u, v) in self.segs[s].iter_mut().zip(&other.segs[s]) {
                *u += alpha * v;
            }
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|_, v| v.conj())
    }
}
