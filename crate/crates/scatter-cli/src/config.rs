//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scatter_core::krein::ThetaPair;
use scatter_core::numerics::{SpatialGrid, SpectralGrid};
use scatter_core::potential::PotentialSpec;
use scatter_core::C64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Jost,
    Spectrum,
    Eigenfun,
    Waveop,
    Propagate,
    Sweep,
    Acceptance,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Jost => "jost",
            Experiment::Spectrum => "spectrum",
            Experiment::Eigenfun => "eigenfun",
            Experiment::Waveop => "waveop",
            Experiment::Propagate => "propagate",
            Experiment::Sweep => "sweep",
            Experiment::Acceptance => "acceptance",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Validation(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub x_min: f64,
    pub a: f64,
    pub b: f64,
    pub x_max: f64,
    pub counts: [usize; 3],
}

impl Default for GridBlock {
    fn default() -> Self {
        Self { x_min: -10.0, a: 0.0, b: 1.0, x_max: 10.0, counts: [401, 101, 401] }
    }
}

impl GridBlock {
    pub fn build(&self) -> Result<SpatialGrid, CliError> {
        Ok(SpatialGrid::new(self.x_min, self.a, self.b, self.x_max, self.counts)?)
    }
}

/// A single interface pair or a ladder `s · (θ1, θ2)` over `sizes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ThetaBlock {
    Pair { theta1: C64, theta2: C64 },
    Ladder { theta1: C64, theta2: C64, sizes: Vec<f64> },
}

impl ThetaBlock {
    pub fn pairs(&self) -> Vec<ThetaPair> {
        match self {
            ThetaBlock::Pair { theta1, theta2 } => vec![ThetaPair::new(*theta1, *theta2)],
            ThetaBlock::Ladder { theta1, theta2, sizes } => {
                sizes.iter().map(|&s| ThetaPair::new(*theta1, *theta2).scaled(s)).collect()
            }
        }
    }

    pub fn sizes(&self) -> Option<&[f64]> {
        match self {
            ThetaBlock::Ladder { sizes, .. } => Some(sizes),
            ThetaBlock::Pair { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative error of `|w|² - |w0|² = 4k²` in the jost report.
    pub wronskian: f64,
    /// Interface-condition residual of eigenfunctions.
    pub interface: f64,
    /// PDE residual of eigenfunctions.
    pub pde: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { wronskian: 1e-8, interface: 1e-6, pde: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JostBlock {
    pub k_values: Vec<f64>,
}

impl Default for JostBlock {
    fn default() -> Self {
        Self { k_values: (1..=20).map(|i| 0.25 * i as f64).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumBlock {
    /// `[re_min, re_max, im_min, im_max]`.
    pub region: [f64; 4],
    pub resolution: [usize; 2],
    /// Bound-state energy of the reference operator to continue in θ.
    pub track: Option<f64>,
}

impl Default for SpectrumBlock {
    fn default() -> Self {
        Self { region: [-5.0, -0.1, -1.0, 1.0], resolution: [41, 33], track: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenfunBlock {
    pub k_values: Vec<f64>,
    /// Also write one value table per k.
    pub tables: bool,
}

impl Default for EigenfunBlock {
    fn default() -> Self {
        Self { k_values: vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0], tables: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketBlock {
    pub x0: f64,
    pub sigma: f64,
    pub k0: f64,
}

impl Default for PacketBlock {
    fn default() -> Self {
        Self { x0: -4.0, sigma: 1.0, k0: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagateBlock {
    pub packet: PacketBlock,
    pub times: Vec<f64>,
}

impl Default for PropagateBlock {
    fn default() -> Self {
        Self { packet: PacketBlock::default(), times: vec![-32.0, -8.0, -2.0, 0.0, 1.0, 5.0, 20.0, 100.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepQuantity {
    /// `‖W_θ - I‖`.
    WaveDeviation,
    /// Remainder norm at `sweep.time`.
    Remainder,
    /// `|E(θ) - E(0)|` continued from `spectrum.track`.
    EigenvalueShift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub quantity: SweepQuantity,
    pub time: f64,
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self { quantity: SweepQuantity::WaveDeviation, time: 10.0 }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub spectral: SpectralGrid,
    #[serde(default)]
    pub theta: Option<ThetaBlock>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub jost: JostBlock,
    #[serde(default)]
    pub spectrum: SpectrumBlock,
    #[serde(default)]
    pub eigenfun: EigenfunBlock,
    #[serde(default)]
    pub propagate: PropagateBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical serialization without the output location; the input of the config hash.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("output");
        }
        v.to_string()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Validation(m.to_string()));
        self.grid.build()?;
        self.spectral.validate()?;
        let t = &self.tolerances;
        if ![t.wronskian, t.interface, t.pde].iter().all(|v| v.is_finite() && *v > 0.0) {
            return bad("tolerances must be positive");
        }
        let needs_potential = self.experiment != Experiment::Acceptance;
        if needs_potential && self.potential.is_none() {
            return bad("this experiment needs a potential block");
        }
        if let Some(theta) = &self.theta {
            if let ThetaBlock::Ladder { sizes, .. } = theta {
                if sizes.len() < 2 || sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return bad("a theta ladder needs at least two positive sizes");
                }
            }
            let finite = theta.pairs().iter().all(|p| p.theta1.is_finite() && p.theta2.is_finite());
            if !finite {
                return bad("theta entries must be finite");
            }
        }
        match self.experiment {
            Experiment::Jost => {
                if self.jost.k_values.is_empty() || self.jost.k_values.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
                    return bad("jost.k_values must be non-empty and positive");
                }
            }
            Experiment::Spectrum => {
                let [r0, r1, i0, i1] = self.spectrum.region;
                if !(r0 < r1 && i0 < i1) {
                    return bad("spectrum.region must have positive extent");
                }
                if self.spectrum.resolution.iter().any(|n| *n < 2) {
                    return bad("spectrum.resolution needs at least 2 nodes per axis");
                }
            }
            Experiment::Eigenfun => {
                if self.eigenfun.k_values.is_empty() || self.eigenfun.k_values.iter().any(|k| !k.is_finite() || *k == 0.0) {
                    return bad("eigenfun.k_values must be non-empty, finite and non-zero");
                }
                if matches!(self.theta, Some(ThetaBlock::Ladder { .. })) {
                    return bad("eigenfun takes a single theta pair");
                }
            }
            Experiment::Waveop => {
                if self.theta.is_none() {
                    return bad("waveop needs a theta block");
                }
            }
            Experiment::Propagate => {
                if !matches!(self.theta, Some(ThetaBlock::Pair { .. })) {
                    return bad("propagate needs a single theta pair");
                }
                let p = self.propagate.packet;
                if !(p.sigma > 0.0) || self.propagate.times.is_empty() {
                    return bad("propagate needs a positive packet width and at least one time");
                }
            }
            Experiment::Sweep => {
                if !matches!(self.theta, Some(ThetaBlock::Ladder { .. })) {
                    return bad("sweep needs a theta ladder");
                }
                if self.sweep.quantity == SweepQuantity::EigenvalueShift && self.spectrum.track.is_none() {
                    return bad("eigenvalue_shift sweeps need spectrum.track");
                }
            }
            Experiment::Acceptance => {}
        }
        Ok(())
    }
}
