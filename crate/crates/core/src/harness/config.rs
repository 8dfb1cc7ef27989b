//! JSON configuration format shared by the CLI subcommands.
//!
//! A config file carries up to six sections; each subcommand reads the
//! ones it needs:
//!
//! ```json
//! {
//!   "manifold": {"N": 3, "warp": {"kind": "hyperbolic", "h": 1.0}},
//!   "equation": {"m": 2.0, "p": 3.0},
//!   "curvature": {"h": 1.0, "k": 1.0},
//!   "barrier": {"kind": "outer-supersolution", "C": 2.0, "a": 2.0,
//!               "family": "decay-log-power", "alpha": 1.0, "beta": 1.0,
//!               "tau": 100.0},
//!   "solver": {"n_cells": 512, "r_max": 12.0, "cfl_safety": 0.4,
//!              "blowup_threshold": 1e8, "t_end": 10.0},
//!   "initial": {"kind": "bump", "radius": 1.0, "height": 0.05},
//!   "scenario": {"tag": "T31i"},
//!   "sweep": {"m_values": [2.0], "p_values": [2.5, 3.0], "data": "large"}
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::barrier::{BarrierKind, BarrierSpec, Horizon, ProfileFamily, TimeProfile};
use crate::error::{Error, Result};
use crate::geometry::{ModelManifold, Warp};
use crate::solver::{InitialData, OutputCadence, SolverConfig};

use super::scenario::{Scenario, ScenarioTag};
use super::sweep::{DataSize, SweepTemplate};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WarpConfig {
    Euclidean,
    Hyperbolic { h: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldConfig {
    #[serde(rename = "N")]
    pub dim: u32,
    pub warp: WarpConfig,
}

impl ManifoldConfig {
    pub fn build(&self) -> Result<ModelManifold> {
        let warp = match self.warp {
            WarpConfig::Euclidean => Warp::Euclidean,
            WarpConfig::Hyperbolic { h } => Warp::Hyperbolic { h },
        };
        ModelManifold::new(self.dim, warp)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EquationConfig {
    pub m: f64,
    pub p: f64,
}

/// Explicit curvature-bound constants; default to the hyperbolic warp's
/// scale when absent.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CurvatureConfig {
    pub h: Option<f64>,
    pub k: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarrierConfig {
    pub kind: BarrierKind,
    #[serde(rename = "C")]
    pub amplitude: f64,
    pub a: f64,
    pub family: ProfileFamily,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(rename = "T", default)]
    pub t_horizon: Option<f64>,
}

impl BarrierConfig {
    pub fn build(&self, equation: &EquationConfig) -> Result<BarrierSpec> {
        let horizon = match (self.tau, self.t_horizon) {
            (Some(tau), None) => Horizon::Shifted { tau },
            (None, Some(t_end)) => Horizon::Blowup { t_end },
            _ => {
                return Err(Error::Config(
                    "barrier needs exactly one of `tau` and `T`".into(),
                ))
            }
        };
        let profile = TimeProfile::new(self.family, self.alpha, self.beta, equation.m, horizon)?;
        BarrierSpec::new(self.amplitude, self.a, profile, equation.p, self.kind)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSection {
    pub n_cells: usize,
    pub r_max: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub blowup_threshold: f64,
    pub max_steps: u64,
    pub output_cadence: OutputCadence,
    pub include_reaction: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        let base = SolverConfig::default();
        SolverSection {
            n_cells: 256,
            r_max: 10.0,
            t_end: 10.0,
            cfl_safety: base.cfl_safety,
            blowup_threshold: base.blowup_threshold,
            max_steps: base.max_steps,
            output_cadence: base.output_cadence,
            include_reaction: base.include_reaction,
        }
    }
}

impl SolverSection {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl_safety: self.cfl_safety,
            blowup_threshold: self.blowup_threshold,
            max_steps: self.max_steps,
            output_cadence: self.output_cadence,
            include_reaction: self.include_reaction,
        }
    }
}

/// Scenario section: the tag plus optional overrides of the tag defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioSection {
    pub tag: ScenarioTag,
    #[serde(default)]
    pub dim: Option<u32>,
    #[serde(default)]
    pub curvature: Option<f64>,
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub support_radius: Option<f64>,
    #[serde(default)]
    pub data_height: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub barrier_scale: Option<f64>,
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default)]
    pub n_cells: Option<usize>,
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub sandwich_slack: Option<f64>,
    #[serde(default)]
    pub blowup_threshold: Option<f64>,
}

impl ScenarioSection {
    pub fn build(&self) -> Scenario {
        let mut s = Scenario::defaults(self.tag);
        if let Some(v) = self.dim {
            s.dim = v;
        }
        if let Some(v) = self.curvature {
            s.curvature = v;
        }
        if let Some(v) = self.m {
            s.m = v;
        }
        if let Some(v) = self.p {
            s.p = v;
        }
        if let Some(v) = self.support_radius {
            s.support_radius = v;
        }
        if let Some(v) = self.data_height {
            s.data_height = Some(v);
        }
        if let Some(v) = self.alpha {
            s.alpha = Some(v);
        }
        if let Some(v) = self.barrier_scale {
            s.barrier_scale = Some(v);
        }
        if let Some(v) = self.r_max {
            s.r_max = Some(v);
        }
        if let Some(v) = self.n_cells {
            s.n_cells = v;
        }
        if let Some(v) = self.t_end {
            s.t_end = v;
        }
        if let Some(v) = self.sandwich_slack {
            s.sandwich_slack = v;
        }
        if let Some(v) = self.blowup_threshold {
            s.solver.blowup_threshold = v;
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSection {
    pub m_values: Vec<f64>,
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub data: Option<DataSize>,
    #[serde(default)]
    pub dim: Option<u32>,
    #[serde(default)]
    pub curvature: Option<f64>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub n_cells: Option<usize>,
}

impl SweepSection {
    pub fn template(&self) -> SweepTemplate {
        let mut t = SweepTemplate::default();
        if let Some(v) = self.data {
            t.data = v;
        }
        if let Some(v) = self.dim {
            t.dim = v;
        }
        if let Some(v) = self.curvature {
            t.curvature = v;
        }
        if let Some(v) = self.horizon {
            t.horizon = v;
        }
        if let Some(v) = self.n_cells {
            t.n_cells = v;
        }
        t
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FileConfig {
    #[serde(default)]
    pub manifold: Option<ManifoldConfig>,
    #[serde(default)]
    pub equation: Option<EquationConfig>,
    #[serde(default)]
    pub curvature: Option<CurvatureConfig>,
    #[serde(default)]
    pub barrier: Option<BarrierConfig>,
    #[serde(default)]
    pub solver: Option<SolverSection>,
    #[serde(default)]
    pub initial: Option<InitialData>,
    #[serde(default)]
    pub scenario: Option<ScenarioSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn require_manifold(&self) -> Result<ModelManifold> {
        self.manifold
            .as_ref()
            .ok_or_else(|| Error::Config("missing `manifold` section".into()))?
            .build()
    }

    pub fn require_equation(&self) -> Result<EquationConfig> {
        self.equation
            .ok_or_else(|| Error::Config("missing `equation` section".into()))
    }

    /// Curvature constants, defaulting to the hyperbolic warp scale.
    pub fn curvature_constants(&self) -> (Option<f64>, Option<f64>) {
        let from_warp = self.manifold.as_ref().and_then(|m| match m.warp {
            WarpConfig::Hyperbolic { h } => Some(h),
            WarpConfig::Euclidean => None,
        });
        let section = self.curvature.unwrap_or_default();
        (section.h.or(from_warp), section.k.or(from_warp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_schema() {
        let text = r#"{
            "manifold": {"N": 3, "warp": {"kind": "hyperbolic", "h": 1.0}},
            "equation": {"m": 2.0, "p": 3.0},
            "barrier": {"kind": "outer-supersolution", "C": 2.0, "a": 2.0,
                        "family": "decay-log-power", "alpha": 1.0, "beta": 1.0,
                        "tau": 100.0},
            "solver": {"n_cells": 128, "r_max": 8.0, "t_end": 2.0},
            "initial": {"kind": "bump", "radius": 1.0, "height": 0.05}
        }"#;
        let config: FileConfig = serde_json::from_str(text).unwrap();
        let manifold = config.require_manifold().unwrap();
        assert_eq!(manifold.dim(), 3);
        let eq = config.require_equation().unwrap();
        let spec = config.barrier.as_ref().unwrap().build(&eq).unwrap();
        assert_eq!(spec.amplitude(), 2.0);
        assert_eq!(config.curvature_constants(), (Some(1.0), Some(1.0)));
        let solver = config.solver.unwrap();
        assert_eq!(solver.n_cells, 128);
    }

    #[test]
    fn barrier_requires_exactly_one_horizon() {
        let eq = EquationConfig { m: 2.0, p: 3.0 };
        let bad = BarrierConfig {
            kind: BarrierKind::OuterSupersolution,
            amplitude: 1.0,
            a: 1.0,
            family: ProfileFamily::DecayPower,
            alpha: 0.6,
            beta: 0.4,
            tau: Some(1.0),
            t_horizon: Some(0.5),
        };
        assert!(matches!(bad.build(&eq), Err(Error::Config(_))));
    }
}
