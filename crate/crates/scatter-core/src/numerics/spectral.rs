//! Symmetric momentum window used to discretize the k-integrals.

use serde::{Deserialize, Serialize};

use crate::{Result, ScatterError};

/// Uniform momentum nodes on `[-k_max, -exclusion] ∪ [exclusion, k_max]`.
///
/// With `exclusion > 0` each half carries `n_k / 2` nodes and `k = 0` is never a node.
/// With `exclusion == 0` the nodes cover `[-k_max, k_max]` uniformly with `n_k` odd.
/// Every node carries the same cell weight [`SpectralGrid::weight`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub k_max: f64,
    pub n_k: usize,
    pub exclusion: f64,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self { k_max: 8.0, n_k: 1024, exclusion: 0.05 }
    }
}

impl SpectralGrid {
    pub fn new(k_max: f64, n_k: usize, exclusion: f64) -> Result<Self> {
        let g = Self { k_max, n_k, exclusion };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_max.is_finite() && self.k_max > 0.0) {
            return Err(ScatterError::Config("k_max must be positive".into()));
        }
        if !(self.exclusion >= 0.0 && self.exclusion < self.k_max) {
            return Err(ScatterError::Config("exclusion radius must lie in [0, k_max)".into()));
        }
        if self.exclusion > 0.0 {
            if self.n_k < 4 || self.n_k % 2 == 1 {
                return Err(ScatterError::Config(format!(
                    "n_k must be even and >= 4 when k = 0 is excluded, got {}",
                    self.n_k
                )));
            }
        } else if self.n_k < 3 || self.n_k % 2 == 0 {
            return Err(ScatterError::Config(format!(
                "n_k must be odd and >= 3 when k = 0 is included, got {}",
                self.n_k
            )));
        }
        Ok(())
    }

    pub fn k_min(&self) -> f64 {
        -self.k_max
    }

    /// Node spacing, also the quadrature weight of every node.
    pub fn weight(&self) -> f64 {
        if self.exclusion > 0.0 {
            (self.k_max - self.exclusion) / (self.n_k / 2 - 1) as f64
        } else {
            2.0 * self.k_max / (self.n_k - 1) as f64
        }
    }

    /// Nodes of the positive half, ascending, starting at the exclusion radius.
    pub fn half_nodes(&self) -> Vec<f64> {
        let h = self.weight();
        let m = self.n_k / 2;
        if self.exclusion > 0.0 {
            (0..m).map(|l| if l + 1 == m { self.k_max } else { self.exclusion + l as f64 * h }).collect()
        } else {
            (1..=m).map(|l| if l == m { self.k_max } else { l as f64 * h }).collect()
        }
    }

    /// All nodes, ascending.
    pub fn nodes(&self) -> Vec<f64> {
        let half = self.half_nodes();
        let mut out: Vec<f64> = half.iter().rev().map(|p| -p).collect();
        if self.exclusion == 0.0 {
            out.push(0.0);
        }
        out.extend(half);
        out
    }

    /// Index of `-k_j` in [`SpectralGrid::nodes`].
    pub fn mirror(&self, j: usize) -> usize {
        self.n_k - 1 - j
    }

    /// Index in [`SpectralGrid::half_nodes`] of `|k_j|` (`None` for `k = 0`).
    pub fn half_index(&self, j: usize) -> Option<usize> {
        let m = self.n_k / 2;
        if self.exclusion > 0.0 {
            Some(if j < m { m - 1 - j } else { j - m })
        } else if j == m {
            None
        } else if j < m {
            Some(m - 1 - j)
        } else {
            Some(j - m - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window_is_symmetric_without_zero() {
        let g = SpectralGrid::default();
        let k = g.nodes();
        assert_eq!(k.len(), 1024);
        for j in 0..k.len() {
            assert_eq!(k[j], -k[g.mirror(j)]);
            assert!(k[j].abs() >= 0.05 - 1e-15);
        }
        assert_eq!(k[512], 0.05);
        assert_eq!(k[1023], 8.0);
    }

    #[test]
    fn half_index_reads_abs_value() {
        let g = SpectralGrid::new(4.0, 40, 0.1).unwrap();
        let k = g.nodes();
        let half = g.half_nodes();
        for (j, kj) in k.iter().enumerate() {
            assert_eq!(half[g.half_index(j).unwrap()], kj.abs());
        }
    }

    #[test]
    fn zero_included_variant() {
        let g = SpectralGrid::new(2.0, 21, 0.0).unwrap();
        let k = g.nodes();
        assert_eq!(k.len(), 21);
        assert_eq!(k[10], 0.0);
        assert!(g.half_index(10).is_none());
        assert!(SpectralGrid::new(2.0, 20, 0.0).is_err());
        assert!(SpectralGrid::new(2.0, 21, 0.1).is_err());
    }
}
