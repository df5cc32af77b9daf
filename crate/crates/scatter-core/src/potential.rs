//! Compactly supported potentials sampled on the inner segment `[a, b]`.

use serde::{Deserialize, Serialize};

use crate::numerics::grid::{SpatialGrid, INNER, LEFT, RIGHT};
use crate::numerics::quad;
use crate::{Result, ScatterError};

/// Smooth bump `scale * exp(1 - 1/(1 - r^2))`, `r = (x - center) / half_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    pub scale: f64,
}

impl Bump {
    fn eval(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.half_width;
        if r.abs() >= 1.0 {
            0.0
        } else {
            self.scale * (1.0 - 1.0 / (1.0 - r * r)).exp()
        }
    }
}

/// Construction record, serialized as `{"kind": "barrier" | "well" | "bumps" | "samples", ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialSpec {
    /// Constant `height` on `[a, b]`.
    Barrier { height: f64 },
    /// Constant `-depth` on `[a, b]`.
    Well { depth: f64 },
    /// Sum of smooth bumps supported inside `[a, b]`.
    Bumps { bumps: Vec<Bump> },
    /// Raw samples over the flattened grid (segment order, interface nodes duplicated).
    Samples { values: Vec<f64> },
}

/// Real potential with support `[a, b]`; only the inner segment is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: SpatialGrid,
    inner: Vec<f64>,
    spec: Option<PotentialSpec>,
    l1: f64,
    linf: f64,
}

impl Potential {
    fn from_inner(grid: SpatialGrid, inner: Vec<f64>, spec: Option<PotentialSpec>) -> Result<Self> {
        if inner.iter().any(|v| !v.is_finite()) {
            return Err(ScatterError::NonFinite("potential"));
        }
        let abs: Vec<f64> = inner.iter().map(|v| v.abs()).collect();
        let l1 = quad::quadrature_real(&abs, grid.spacing(INNER))?;
        let linf = abs.iter().copied().fold(0.0, f64::max);
        Ok(Self { grid, inner, spec, l1, linf })
    }

    /// Identically zero potential. Only meaningful for Jost-level checks.
    pub fn zero(grid: SpatialGrid) -> Self {
        Self { grid, inner: vec![0.0; grid.count(INNER)], spec: None, l1: 0.0, linf: 0.0 }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// Samples on the inner segment, `a` first.
    pub fn inner_values(&self) -> &[f64] {
        &self.inner
    }

    /// Sample at a node; exterior nodes (including `a-` and `b+`) are zero.
    pub fn at(&self, seg: usize, i: usize) -> f64 {
        if seg == INNER {
            self.inner[i]
        } else {
            0.0
        }
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn linf(&self) -> f64 {
        self.linf
    }

    /// Construction record (`None` for [`Potential::zero`]).
    pub fn spec(&self) -> Option<&PotentialSpec> {
        self.spec.as_ref()
    }

    /// Raw-sample record reproducing this potential exactly on its grid.
    pub fn to_samples(&self) -> PotentialSpec {
        let mut values = vec![0.0; self.grid.len()];
        let o = self.grid.offset(INNER);
        values[o..o + self.inner.len()].copy_from_slice(&self.inner);
        PotentialSpec::Samples { values }
    }

    /// Rebuilds the construction record on another grid (raw samples cannot move).
    pub fn resample(&self, grid: &SpatialGrid) -> Result<Potential> {
        match &self.spec {
            None => Ok(Potential::zero(*grid)),
            Some(spec) => build_potential(spec, grid),
        }
    }
}

/// Builds a potential from its construction record.
pub fn build_potential(spec: &PotentialSpec, grid: &SpatialGrid) -> Result<Potential> {
    let xs = grid.nodes(INNER);
    let inner = match spec {
        PotentialSpec::Barrier { height } => vec![*height; xs.len()],
        PotentialSpec::Well { depth } => vec![-*depth; xs.len()],
        PotentialSpec::Bumps { bumps } => {
            for bump in bumps {
                if !(bump.half_width > 0.0)
                    || bump.center - bump.half_width < grid.a() - 1e-12
                    || bump.center + bump.half_width > grid.b() + 1e-12
                {
                    return Err(ScatterError::Config(format!(
                        "bump centered at {} with half width {} leaves [a, b]",
                        bump.center, bump.half_width
                    )));
                }
            }
            xs.iter().map(|&x| bumps.iter().map(|b| b.eval(x)).sum()).collect()
        }
        PotentialSpec::Samples { values } => {
            if values.len() != grid.len() {
                return Err(ScatterError::Length { expected: grid.len(), got: values.len() });
            }
            for seg in [LEFT, RIGHT] {
                let o = grid.offset(seg);
                if let Some(i) = (0..grid.count(seg)).find(|&i| values[o + i] != 0.0) {
                    return Err(ScatterError::Config(format!(
                        "potential sample at x = {} lies outside [a, b] but is nonzero",
                        grid.x(seg, i)
                    )));
                }
            }
            let o = grid.offset(INNER);
            values[o..o + grid.count(INNER)].to_vec()
        }
    };
    Potential::from_inner(*grid, inner, Some(spec.clone()))
}

/// Pointwise nonnegativity with at least one strictly positive node inside `(a, b)`.
pub fn check_positive(v: &Potential) -> bool {
    let inner = v.inner_values();
    let n = inner.len();
    inner.iter().all(|&x| x >= 0.0) && inner[1..n - 1].iter().any(|&x| x > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SpatialGrid {
        SpatialGrid::new(-10.0, 0.0, 1.0, 10.0, [401, 101, 401]).unwrap()
    }

    #[test]
    fn barrier_and_well() {
        let g = grid();
        let b = build_potential(&PotentialSpec::Barrier { height: 4.0 }, &g).unwrap();
        assert!(b.inner_values().iter().all(|&v| v == 4.0));
        assert_eq!(b.at(LEFT, 400), 0.0);
        assert_eq!(b.at(RIGHT, 0), 0.0);
        assert!((b.l1() - 4.0).abs() < 1e-12);
        assert!(check_positive(&b));
        let w = build_potential(&PotentialSpec::Well { depth: 4.0 }, &g).unwrap();
        assert!(w.inner_values().iter().all(|&v| v == -4.0));
        assert!(!check_positive(&w));
        assert!(!check_positive(&Potential::zero(g)));
    }

    #[test]
    fn samples_outside_support_rejected() {
        let g = grid();
        let mut values = vec![0.0; g.len()];
        values[g.offset(RIGHT) + 1] = 1.0;
        let err = build_potential(&PotentialSpec::Samples { values }, &g).unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn samples_round_trip() {
        let g = grid();
        let spec = PotentialSpec::Bumps {
            bumps: vec![Bump { center: 0.5, half_width: 0.4, scale: 3.0 }],
        };
        let v = build_potential(&spec, &g).unwrap();
        let again = build_potential(&v.to_samples(), &g).unwrap();
        assert_eq!(v.inner_values(), again.inner_values());
    }

    #[test]
    fn bump_must_stay_inside() {
        let g = grid();
        let spec = PotentialSpec::Bumps {
            bumps: vec![Bump { center: 0.9, half_width: 0.4, scale: 1.0 }],
        };
        assert!(build_potential(&spec, &g).is_err());
    }

    #[test]
    fn json_records() {
        let spec: PotentialSpec = serde_json::from_str(r#"{"kind":"barrier","height":4.0}"#).unwrap();
        assert_eq!(spec, PotentialSpec::Barrier { height: 4.0 });
        let text = serde_json::to_string(&PotentialSpec::Well { depth: 2.0 }).unwrap();
        assert_eq!(text, r#"{"kind":"well","depth":2.0}"#);
    }
}
