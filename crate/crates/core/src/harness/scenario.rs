//! End-to-end experiment scenarios: synthesize and certify a barrier,
//! build conforming initial data, run the solver, and assert the
//! scenario's comparison or blow-up property.
//!
//! Certification always precedes simulation: a scenario whose barrier
//! fails to certify returns an error before the solver is touched, which
//! keeps certification failures distinct from assertion failures.

use serde::{Deserialize, Serialize};

use crate::barrier::BarrierSpec;
use crate::certify::{
    ode_blowup_bound, synthesize_subsolution, synthesize_supersolution, Certificate,
    SubsolutionInputs, SubsolutionRegime, SupersolutionInputs, SupersolutionRegime,
};
use crate::error::{Error, Result};
use crate::geometry::{ModelManifold, Warp};
use crate::solver::{
    build_initial_data, ground_state, solve_ball_observed, GroundState, InitialData,
    OutputCadence, RadialField, RadialGrid, RunReport, RunVerdict, SolverConfig,
};

/// Experiment identifiers; each binds a statement about one parameter
/// regime to a falsifiable numerical check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum ScenarioTag {
    /// p > m, small data: global run under the log-decay upper barrier.
    T31i,
    /// p > m, small data: global run under the power-decay upper barrier.
    T31ii,
    /// p > m, large data: finite-time blow-up above the log lower barrier.
    T32i,
    /// p > m, large data: finite-time blow-up above the power lower barrier.
    T32ii,
    /// 1 < p < (m+1)/2: any data stay under the power-growth upper barrier.
    T33i,
    /// p = (m+1)/2: any data stay under the exponential-growth upper barrier.
    T33ii,
    /// 1 < p < m, large data: unbounded growth above the power lower barrier.
    T34,
    /// p = m on exact hyperbolic space: domination by the stationary
    /// profile built from the ground state.
    T35,
}

impl ScenarioTag {
    pub fn all() -> [ScenarioTag; 8] {
        use ScenarioTag::*;
        [T31i, T31ii, T32i, T32ii, T33i, T33ii, T34, T35]
    }
}

/// A fully specified experiment. `defaults` provides a consistent tuned
/// parameter set per tag; fields may be overridden before running.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub tag: ScenarioTag,
    pub dim: u32,
    /// Curvature scale of the hyperbolic model (serves as both bounds).
    pub curvature: f64,
    pub m: f64,
    pub p: f64,
    /// Radius of the data support (upper-barrier scenarios).
    pub support_radius: f64,
    /// Data height; `None` derives it from the barrier's domination bound.
    pub data_height: Option<f64>,
    /// Profile speed override for lower-barrier scenarios.
    pub alpha: Option<f64>,
    /// Spatial scale override for lower-barrier scenarios.
    pub barrier_scale: Option<f64>,
    /// Outer radius of the computational ball; `None` picks a tag-specific
    /// value after synthesis.
    pub r_max: Option<f64>,
    pub n_cells: usize,
    pub t_end: f64,
    /// Relative slack of the comparison checks.
    pub sandwich_slack: f64,
    pub solver: SolverConfig,
}

impl Scenario {
    pub fn defaults(tag: ScenarioTag) -> Scenario {
        let base = Scenario {
            tag,
            dim: 3,
            curvature: 1.0,
            m: 2.0,
            p: 3.0,
            support_radius: 1.0,
            data_height: None,
            alpha: None,
            barrier_scale: None,
            r_max: None,
            n_cells: 512,
            t_end: 10.0,
            sandwich_slack: 0.02,
            solver: SolverConfig::default(),
        };
        match tag {
            ScenarioTag::T31i | ScenarioTag::T31ii => base,
            ScenarioTag::T32i | ScenarioTag::T32ii => Scenario {
                n_cells: 512,
                t_end: 1.0, // clipped to the synthesized horizon
                ..base
            },
            ScenarioTag::T33i => Scenario {
                m: 3.0,
                p: 1.5,
                n_cells: 192,
                data_height: Some(10.0),
                ..base
            },
            ScenarioTag::T33ii => Scenario {
                m: 3.0,
                p: 2.0,
                n_cells: 192,
                data_height: Some(10.0),
                ..base
            },
            ScenarioTag::T34 => Scenario {
                m: 2.0,
                p: 1.5,
                alpha: Some(0.02),
                barrier_scale: Some(0.25),
                n_cells: 128,
                t_end: 1e3,
                solver: SolverConfig {
                    blowup_threshold: 1e12,
                    output_cadence: OutputCadence::Geometric {
                        first: 0.05,
                        factor: 1.5,
                    },
                    ..SolverConfig::default()
                },
                ..base
            },
            ScenarioTag::T35 => Scenario {
                m: 2.0,
                p: 2.0,
                curvature: 2.0,
                n_cells: 256,
                t_end: 5.0,
                r_max: Some(10.0),
                ..base
            },
        }
    }

    pub fn manifold(&self) -> Result<ModelManifold> {
        ModelManifold::new(
            self.dim,
            Warp::Hyperbolic {
                h: self.curvature,
            },
        )
    }

    fn validate(&self) -> Result<()> {
        let (m, p) = (self.m, self.p);
        let ok = match self.tag {
            ScenarioTag::T31i | ScenarioTag::T31ii | ScenarioTag::T32i | ScenarioTag::T32ii => {
                p > m
            }
            ScenarioTag::T33i => p > 1.0 && p < (m + 1.0) / 2.0,
            ScenarioTag::T33ii => p > 1.0 && p <= (m + 1.0) / 2.0,
            ScenarioTag::T34 => p > 1.0 && p < m,
            ScenarioTag::T35 => {
                (p - m).abs() < 1e-12 && self.curvature >= 2.0 / (self.dim - 1) as f64
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "(m, p) = ({m}, {p}) incompatible with scenario {:?}",
                self.tag
            )))
        }
    }
}

/// One checked property with its margin (nonnegative means pass).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub margin: f64,
    pub passed: bool,
}

impl Assertion {
    fn new(name: &str, margin: f64) -> Assertion {
        Assertion {
            name: name.to_string(),
            margin,
            passed: margin >= 0.0,
        }
    }
}

/// Outcome of a scenario: the run, the certified barrier, the assertion
/// margins, and (for plotting) the barrier amplitude at each tick.
#[derive(Debug)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    pub certificate: Option<Certificate>,
    pub barrier: Option<BarrierSpec>,
    pub run: RunReport,
    /// `(t, barrier sup-norm)` at recorded times.
    pub barrier_amplitude: Vec<(f64, f64)>,
}

/// Worst relative upper-domination margin at one time:
/// `u <= (1 + slack) * barrier` across cells, normalized by the barrier's
/// peak amplitude.
fn upper_domination_margin(field: &RadialField, spec: &BarrierSpec, t: f64, slack: f64) -> f64 {
    let grid = field.grid();
    let peak = spec.amplitude() * spec.profile().zeta(t);
    let floor = 1e-10 * peak;
    let mut worst = f64::INFINITY;
    for (i, &u) in field.values().iter().enumerate() {
        let bar = spec.evaluate(grid.cell_center(i), t).unwrap_or(0.0);
        worst = worst.min(((1.0 + slack) * bar + floor - u) / peak);
    }
    worst
}

/// Worst relative lower-domination margin at one time, restricted to the
/// core region where the barrier exceeds a quarter of its peak (the free
/// boundary itself is resolved only to within a cell).
fn lower_core_margin(field: &RadialField, spec: &BarrierSpec, t: f64, slack: f64) -> f64 {
    let grid = field.grid();
    let peak = spec.amplitude() * spec.profile().zeta(t);
    let mut worst = f64::INFINITY;
    for (i, &u) in field.values().iter().enumerate() {
        let bar = spec.evaluate(grid.cell_center(i), t).unwrap_or(0.0);
        if bar >= 0.25 * peak {
            worst = worst.min((u - (1.0 - slack) * bar) / peak);
        }
    }
    worst
}

fn stationary_margin(field: &RadialField, gs: &GroundState, m: f64, slack: f64) -> f64 {
    let grid = field.grid();
    let mut worst = f64::INFINITY;
    for (i, &u) in field.values().iter().enumerate() {
        let bar = gs
            .stationary_barrier(m, grid.cell_center(i))
            .unwrap_or(0.0);
        worst = worst.min((1.0 + slack) * bar - u);
    }
    worst
}

fn supersolution_regime(tag: ScenarioTag) -> SupersolutionRegime {
    match tag {
        ScenarioTag::T31i => SupersolutionRegime::DecayLogPower,
        ScenarioTag::T31ii => SupersolutionRegime::DecayPower,
        ScenarioTag::T33i => SupersolutionRegime::GrowthPower,
        ScenarioTag::T33ii => SupersolutionRegime::GrowthExp,
        _ => unreachable!(),
    }
}

fn run_upper_barrier_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let manifold = s.manifold()?;
    let regime = supersolution_regime(s.tag);

    // Synthesis drives the data bound; when no height is given, take 90%
    // of the domination bound of the barrier synthesized for size zero.
    let inputs = SupersolutionInputs {
        m: s.m,
        p: s.p,
        dim: s.dim,
        h: s.curvature,
        support_radius: s.support_radius,
        data_sup: s.data_height.unwrap_or(0.0),
    };
    let (spec, cert) = synthesize_supersolution(regime, &inputs)?;
    // A missing height defaults to 90% of the barrier's domination bound.
    let height = s.data_height.unwrap_or_else(|| {
        let factor = 0.5f64.powf((s.m - 1.0).max(1.0 / (s.m - 1.0)));
        0.9 * spec.amplitude() * spec.profile().zeta(0.0) * factor
    });

    let r_max = s.r_max.unwrap_or(12.0);
    let grid = RadialGrid::new(&manifold, r_max, s.n_cells)?;
    let data = InitialData::Bump {
        radius: s.support_radius,
        height,
    };
    let u0 = build_initial_data(&data, &grid)?;

    let mut domination = f64::INFINITY;
    let mut fb_margin = f64::INFINITY;
    let mut amplitudes = Vec::new();
    let slack = s.sandwich_slack;
    let report = solve_ball_observed(&u0, s.m, s.p, s.t_end, &s.solver, |t, field| {
        domination = domination.min(upper_domination_margin(field, &spec, t, slack));
        let bar_support = spec.support_radius(t).unwrap_or(f64::INFINITY);
        let fb = crate::solver::free_boundary_radius(field, None);
        fb_margin = fb_margin.min((bar_support + 2.0 * grid.dr() - fb) / bar_support);
        amplitudes.push((t, spec.amplitude() * spec.profile().zeta(t)));
    })?;

    let completed = matches!(report.verdict, RunVerdict::Completed { .. });
    let assertions = vec![
        Assertion::new("completed", if completed { 0.0 } else { -1.0 }),
        Assertion::new("barrier-domination", domination),
        Assertion::new("free-boundary-bound", fb_margin),
    ];
    let passed = assertions.iter().all(|a| a.passed);
    Ok(ScenarioReport {
        scenario: s.clone(),
        passed,
        assertions,
        certificate: Some(cert),
        barrier: Some(spec),
        run: report,
        barrier_amplitude: amplitudes,
    })
}

fn run_blowup_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let manifold = s.manifold()?;
    let c0 = manifold.unit_ball_drift_constant()?;
    let regime = match s.tag {
        ScenarioTag::T32i => SubsolutionRegime::BlowupLog,
        ScenarioTag::T32ii => SubsolutionRegime::BlowupPower,
        _ => unreachable!(),
    };
    let alpha_default = match regime {
        SubsolutionRegime::BlowupLog => 1.0 / (s.m - 1.0),
        _ => 2.0 / (s.m - 1.0),
    };
    let mut inputs = SubsolutionInputs::new(
        s.m,
        s.p,
        s.dim,
        s.curvature,
        c0,
        s.alpha.unwrap_or(alpha_default),
    );
    if let Some(a) = s.barrier_scale {
        inputs.spatial_scale = a;
    }
    let (spec, cert, requirement) = synthesize_subsolution(regime, &inputs)?;
    let horizon = spec.profile().blowup_time().expect("blow-up family");

    let height = s.data_height.unwrap_or(1.02 * requirement.min_value);
    let r_max = s
        .r_max
        .unwrap_or(requirement.min_support_radius * 1.2 + 1.0);
    let grid = RadialGrid::new(&manifold, r_max, s.n_cells)?;
    let data = InitialData::Annulus {
        inner: 0.0,
        outer: requirement.min_support_radius + 2.0 * grid.dr(),
        height,
    };
    let u0 = build_initial_data(&data, &grid)?;

    // Record on the scale of the reaction flow, which sets the real pace.
    let ode_horizon = ode_blowup_bound(s.p, height)?;
    let mut solver = s.solver;
    if solver.output_cadence == OutputCadence::Auto {
        solver.output_cadence = OutputCadence::Uniform {
            dt: (ode_horizon * 1.5 / 40.0).min(horizon / 40.0),
        };
    }
    let t_end = (horizon * (1.0 - 1e-9)).min(s.t_end.max(horizon * 0.999));

    let slack = s.sandwich_slack;
    let mut domination = f64::INFINITY;
    let mut sup_domination = f64::INFINITY;
    let mut amplitudes = Vec::new();
    let threshold = solver.blowup_threshold;
    let report = solve_ball_observed(&u0, s.m, s.p, t_end, &solver, |t, field| {
        if field.sup_norm() <= threshold {
            domination = domination.min(lower_core_margin(field, &spec, t, slack));
            let peak = spec.amplitude() * spec.profile().zeta(t);
            sup_domination =
                sup_domination.min((field.sup_norm() - (1.0 - slack) * peak) / peak);
            amplitudes.push((t, peak));
        }
    })?;

    let t_star = match report.verdict {
        RunVerdict::BlowupDetected { t_star } => t_star,
        _ => f64::INFINITY,
    };
    let blowup_margin = if t_star.is_finite() {
        (horizon - t_star) / horizon
    } else {
        -1.0
    };
    let assertions = vec![
        Assertion::new("blowup-before-horizon", blowup_margin),
        Assertion::new("barrier-sup-domination", sup_domination),
        Assertion::new("barrier-core-domination", domination),
    ];
    let passed = assertions.iter().all(|a| a.passed);
    Ok(ScenarioReport {
        scenario: s.clone(),
        passed,
        assertions,
        certificate: Some(cert),
        barrier: Some(spec),
        run: report,
        barrier_amplitude: amplitudes,
    })
}

fn run_growth_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let manifold = s.manifold()?;
    let c0 = manifold.unit_ball_drift_constant()?;
    let mut inputs = SubsolutionInputs::new(
        s.m,
        s.p,
        s.dim,
        s.curvature,
        c0,
        s.alpha.unwrap_or(0.02),
    );
    inputs.spatial_scale = s.barrier_scale.unwrap_or(0.25);
    let (spec, cert, requirement) = synthesize_subsolution(SubsolutionRegime::GrowthPower, &inputs)?;

    let barrier_support_end = spec.support_radius(s.t_end)?;
    let r_max = s.r_max.unwrap_or(barrier_support_end * 1.3 + 1.0);
    let grid = RadialGrid::new(&manifold, r_max, s.n_cells)?;
    let height = s.data_height.unwrap_or(1.05 * requirement.min_value);
    let data = InitialData::Annulus {
        inner: 0.0,
        outer: requirement.min_support_radius + 2.0 * grid.dr(),
        height,
    };
    let u0 = build_initial_data(&data, &grid)?;

    let slack = s.sandwich_slack;
    let mut domination = f64::INFINITY;
    let mut sup_domination = f64::INFINITY;
    let mut max_sup: f64 = 0.0;
    let mut amplitudes = Vec::new();
    let report = solve_ball_observed(&u0, s.m, s.p, s.t_end, &s.solver, |t, field| {
        domination = domination.min(lower_core_margin(field, &spec, t, slack));
        let peak = spec.amplitude() * spec.profile().zeta(t);
        sup_domination = sup_domination.min((field.sup_norm() - (1.0 - slack) * peak) / peak);
        max_sup = max_sup.max(field.sup_norm());
        amplitudes.push((t, peak));
    })?;

    let completed = matches!(report.verdict, RunVerdict::Completed { .. });
    let growth_margin = max_sup / (10.0 * height) - 1.0;
    let assertions = vec![
        Assertion::new("completed", if completed { 0.0 } else { -1.0 }),
        Assertion::new("growth-above-initial", growth_margin),
        Assertion::new("barrier-sup-domination", sup_domination),
        Assertion::new("barrier-core-domination", domination),
    ];
    let passed = assertions.iter().all(|a| a.passed);
    Ok(ScenarioReport {
        scenario: s.clone(),
        passed,
        assertions,
        certificate: Some(cert),
        barrier: Some(spec),
        run: report,
        barrier_amplitude: amplitudes,
    })
}

fn run_stationary_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let manifold = s.manifold()?;
    let r_max = s.r_max.unwrap_or(10.0);
    let gs = ground_state(s.dim, s.curvature, r_max, 4 * s.n_cells + 1)?;
    if gs.lambda1() < 1.0 {
        return Err(Error::Contract(format!(
            "stationary scenario needs lambda1 >= 1, got {}",
            gs.lambda1()
        )));
    }
    let grid = RadialGrid::new(&manifold, r_max, s.n_cells)?;
    let fraction = s.data_height.unwrap_or(0.9);
    let m = s.m;
    let u0 = RadialField::from_fn(grid.clone(), |r| {
        fraction * gs.stationary_barrier(m, r).unwrap_or(0.0)
    });

    let slack = s.sandwich_slack;
    let mut domination = f64::INFINITY;
    let mut amplitudes = Vec::new();
    let report = solve_ball_observed(&u0, s.m, s.p, s.t_end, &s.solver, |t, field| {
        domination = domination.min(stationary_margin(field, &gs, m, slack));
        amplitudes.push((t, 1.0));
    })?;

    let completed = matches!(report.verdict, RunVerdict::Completed { .. });
    let assertions = vec![
        Assertion::new("completed", if completed { 0.0 } else { -1.0 }),
        Assertion::new("stationary-domination", domination),
        Assertion::new(
            "eigenvalue-floor",
            (gs.lambda1() - 1.0) / gs.lambda1().max(1.0),
        ),
    ];
    let passed = assertions.iter().all(|a| a.passed);
    Ok(ScenarioReport {
        scenario: s.clone(),
        passed,
        assertions,
        certificate: None,
        barrier: None,
        run: report,
        barrier_amplitude: amplitudes,
    })
}

/// Runs a scenario end to end. Synthesis or certification failures come
/// back as errors; assertion failures come back as a report with
/// `passed = false`.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport> {
    s.validate()?;
    match s.tag {
        ScenarioTag::T31i | ScenarioTag::T31ii | ScenarioTag::T33i | ScenarioTag::T33ii => {
            run_upper_barrier_scenario(s)
        }
        ScenarioTag::T32i | ScenarioTag::T32ii => run_blowup_scenario(s),
        ScenarioTag::T34 => run_growth_scenario(s),
        ScenarioTag::T35 => run_stationary_scenario(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_validation() {
        let mut s = Scenario::defaults(ScenarioTag::T31i);
        s.p = 1.5; // not > m
        assert!(matches!(run_scenario(&s), Err(Error::Contract(_))));

        let mut s = Scenario::defaults(ScenarioTag::T33i);
        s.p = 2.5; // not < (m+1)/2 = 2
        assert!(matches!(run_scenario(&s), Err(Error::Contract(_))));
    }

    #[test]
    fn blowup_scenario_detects_before_horizon() {
        let mut s = Scenario::defaults(ScenarioTag::T32ii);
        s.n_cells = 128;
        let report = run_scenario(&s).unwrap();
        assert!(report.passed, "{:?}", report.assertions);
        assert!(matches!(
            report.run.verdict,
            RunVerdict::BlowupDetected { .. }
        ));
    }
}
