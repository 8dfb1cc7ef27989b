//! Empirical regime map over `(m, p)` cells. Cells falling in a proven
//! regime carry the regime's expected outcome and a consistency flag; the
//! open strip `(m+1)/2 < p < m` is swept but labeled empirical only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certify::{
    ode_blowup_bound, synthesize_subsolution, synthesize_supersolution, SubsolutionInputs,
    SubsolutionRegime, SupersolutionInputs, SupersolutionRegime,
};
use crate::error::{Error, Result};
use crate::solver::{
    build_initial_data, solve_ball, InitialData, OutputCadence, RadialGrid, RunVerdict,
    SolverConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataSize {
    /// Data at the synthesized lower-barrier requirement (or a fixed bump
    /// on the critical line).
    Large,
    /// Data at 90% of the synthesized upper-barrier domination bound.
    Small,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepTemplate {
    pub data: DataSize,
    pub dim: u32,
    pub curvature: f64,
    pub horizon: f64,
    pub n_cells: usize,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        SweepTemplate {
            data: DataSize::Large,
            dim: 3,
            curvature: 1.0,
            horizon: 5.0,
            n_cells: 96,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CellVerdict {
    GlobalWithinHorizon,
    FiniteBlowup { t_star: f64 },
    GrowingUnbounded,
    Inconclusive { reason: String },
}

impl CellVerdict {
    pub fn class_index(&self) -> usize {
        match self {
            CellVerdict::GlobalWithinHorizon => 0,
            CellVerdict::FiniteBlowup { .. } => 1,
            CellVerdict::GrowingUnbounded => 2,
            CellVerdict::Inconclusive { .. } => 3,
        }
    }

    pub fn short_label(&self) -> &'static str {
        match self {
            CellVerdict::GlobalWithinHorizon => "G",
            CellVerdict::FiniteBlowup { .. } => "F",
            CellVerdict::GrowingUnbounded => "U",
            CellVerdict::Inconclusive { .. } => "I",
        }
    }
}

/// Theory-side expectation for a cell, where one exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// Finite-time blow-up must be observed (p > m with certified large data).
    FiniteBlowup,
    /// Finite-time blow-up must not be observed (p <= (m+1)/2).
    NoFiniteBlowup,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCell {
    pub m: f64,
    pub p: f64,
    pub verdict: CellVerdict,
    pub expected: Option<Expectation>,
    /// Observed verdict is compatible with the expectation (vacuously true
    /// for empirical cells).
    pub consistent: bool,
    /// Cell lies in the strip where no theorem applies.
    pub empirical_only: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub template: SweepTemplate,
    pub m_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub cells: Vec<SweepCell>,
    /// Hash of the inputs; identical inputs reproduce identical verdicts.
    pub provenance: String,
}

fn expectation(m: f64, p: f64, data: DataSize) -> (Option<Expectation>, bool) {
    let critical = (m + 1.0) / 2.0;
    if p > m {
        match data {
            DataSize::Large => (Some(Expectation::FiniteBlowup), false),
            DataSize::Small => (Some(Expectation::NoFiniteBlowup), false),
        }
    } else if p <= critical {
        (Some(Expectation::NoFiniteBlowup), false)
    } else if p < m {
        (None, true) // the open strip
    } else {
        (None, false) // critical line p = m
    }
}

fn run_cell(m: f64, p: f64, template: &SweepTemplate) -> Result<CellVerdict> {
    let manifold =
        crate::geometry::ModelManifold::hyperbolic(template.dim, template.curvature)?;
    let config = SolverConfig {
        blowup_threshold: 1e8,
        output_cadence: OutputCadence::Auto,
        ..SolverConfig::default()
    };

    // Build data per template.
    let (data, r_max, t_end) = match template.data {
        DataSize::Large => {
            if p > m {
                let c0 = manifold.unit_ball_drift_constant()?;
                let inputs =
                    SubsolutionInputs::new(m, p, template.dim, template.curvature, c0, 2.0 / (m - 1.0));
                let (spec, _, req) = synthesize_subsolution(SubsolutionRegime::BlowupPower, &inputs)?;
                let horizon = spec.profile().blowup_time().expect("blow-up family");
                let r_max = req.min_support_radius * 1.2 + 1.0;
                (
                    InitialData::Annulus {
                        inner: 0.0,
                        outer: req.min_support_radius + 2.0 * r_max / template.n_cells as f64,
                        height: 1.02 * req.min_value,
                    },
                    r_max,
                    template.horizon.min(horizon * (1.0 - 1e-9)),
                )
            } else if p < m {
                let c0 = manifold.unit_ball_drift_constant()?;
                let mut inputs =
                    SubsolutionInputs::new(m, p, template.dim, template.curvature, c0, 0.02);
                inputs.spatial_scale = 0.25;
                let (spec, _, req) = synthesize_subsolution(SubsolutionRegime::GrowthPower, &inputs)?;
                let r_max = spec.support_radius(template.horizon)? * 1.3 + 1.0;
                (
                    InitialData::Annulus {
                        inner: 0.0,
                        outer: req.min_support_radius + 2.0 * r_max / template.n_cells as f64,
                        height: 1.05 * req.min_value,
                    },
                    r_max,
                    template.horizon,
                )
            } else {
                (
                    InitialData::Bump {
                        radius: 1.0,
                        height: 10.0,
                    },
                    8.0,
                    template.horizon,
                )
            }
        }
        DataSize::Small => {
            let height = if p > m {
                let inputs = SupersolutionInputs {
                    m,
                    p,
                    dim: template.dim,
                    h: template.curvature,
                    support_radius: 1.0,
                    data_sup: 0.0,
                };
                let (spec, _) =
                    synthesize_supersolution(SupersolutionRegime::DecayLogPower, &inputs)?;
                let factor = 0.5f64.powf((m - 1.0).max(1.0 / (m - 1.0)));
                0.9 * spec.amplitude() * spec.profile().zeta(0.0) * factor
            } else {
                1.0
            };
            (
                InitialData::Bump {
                    radius: 1.0,
                    height,
                },
                8.0,
                template.horizon,
            )
        }
    };

    let grid = RadialGrid::new(&manifold, r_max, template.n_cells)?;
    let u0 = build_initial_data(&data, &grid)?;
    let initial_sup = u0.sup_norm();
    // Guard: with reaction-dominated data the time step collapses near the
    // blow-up threshold; the ODE horizon bounds the useful run length.
    let _ = ode_blowup_bound(p, initial_sup)?;
    let report = solve_ball(&u0, m, p, t_end, &config)?;

    let max_sup = report
        .series
        .iter()
        .map(|r| r.sup_norm)
        .fold(0.0, f64::max);
    Ok(match report.verdict {
        RunVerdict::BlowupDetected { t_star } => CellVerdict::FiniteBlowup { t_star },
        RunVerdict::Completed { .. } => {
            if max_sup >= 10.0 * initial_sup && initial_sup > 0.0 {
                CellVerdict::GrowingUnbounded
            } else {
                CellVerdict::GlobalWithinHorizon
            }
        }
        RunVerdict::StepLimitReached { t } => CellVerdict::Inconclusive {
            reason: format!("step limit at t = {t:.3e}"),
        },
    })
}

/// Sweeps the `(m, p)` grid; cells run concurrently and aggregate in grid
/// order, keyed by their coordinates.
pub fn regime_sweep(
    m_values: &[f64],
    p_values: &[f64],
    template: &SweepTemplate,
) -> Result<SweepResult> {
    if m_values.is_empty() || p_values.is_empty() {
        return Err(Error::Contract("sweep needs nonempty m and p lists".into()));
    }
    for &m in m_values {
        if !(m > 1.0) {
            return Err(Error::Contract(format!("sweep needs m > 1, got {m}")));
        }
    }
    for &p in p_values {
        if !(p > 1.0) {
            return Err(Error::Contract(format!("sweep needs p > 1, got {p}")));
        }
    }

    let pairs: Vec<(f64, f64)> = m_values
        .iter()
        .flat_map(|&m| p_values.iter().map(move |&p| (m, p)))
        .collect();
    let cells: Vec<SweepCell> = pairs
        .par_iter()
        .map(|&(m, p)| {
            let (expected, empirical_only) = expectation(m, p, template.data);
            let verdict = match run_cell(m, p, template) {
                Ok(v) => v,
                Err(e) => CellVerdict::Inconclusive {
                    reason: e.to_string(),
                },
            };
            let consistent = match (expected, &verdict) {
                (Some(Expectation::FiniteBlowup), CellVerdict::FiniteBlowup { .. }) => true,
                (Some(Expectation::FiniteBlowup), _) => false,
                (Some(Expectation::NoFiniteBlowup), CellVerdict::FiniteBlowup { .. }) => false,
                (Some(Expectation::NoFiniteBlowup), CellVerdict::Inconclusive { .. }) => false,
                (Some(Expectation::NoFiniteBlowup), _) => true,
                (None, _) => true,
            };
            SweepCell {
                m,
                p,
                verdict,
                expected,
                consistent,
                empirical_only,
            }
        })
        .collect();

    let mut hasher = Sha256::new();
    hasher.update(format!(
        "{m_values:?}|{p_values:?}|{:?}|{}|{}|{}|{}",
        template.data, template.dim, template.curvature, template.horizon, template.n_cells
    ));
    let provenance = hex_digest(&hasher.finalize());

    Ok(SweepResult {
        template: *template,
        m_values: m_values.to_vec(),
        p_values: p_values.to_vec(),
        cells,
        provenance,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lists_are_rejected() {
        let t = SweepTemplate::default();
        assert!(regime_sweep(&[], &[2.0], &t).is_err());
        assert!(regime_sweep(&[2.0], &[], &t).is_err());
    }

    #[test]
    fn expectation_map() {
        assert_eq!(
            expectation(2.0, 3.0, DataSize::Large).0,
            Some(Expectation::FiniteBlowup)
        );
        assert_eq!(
            expectation(3.0, 1.5, DataSize::Large).0,
            Some(Expectation::NoFiniteBlowup)
        );
        // Open strip: (m+1)/2 < p < m.
        let (exp, empirical) = expectation(3.0, 2.5, DataSize::Large);
        assert_eq!(exp, None);
        assert!(empirical);
    }
}
