//! Python bindings exposing the main types and operations: manifolds,
//! time profiles, barriers, certification/synthesis, the radial solver
//! and the hyperbolic ground state.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pmreact_core::barrier::{BarrierKind, BarrierSpec, Horizon, ProfileFamily, TimeProfile};
use pmreact_core::certify::{
    check_subsolution, check_supersolution, default_time_grid, ode_blowup_bound,
    synthesize_subsolution, synthesize_supersolution, Certificate, SubsolutionInputs,
    SubsolutionRegime, SupersolutionInputs, SupersolutionRegime,
};
use pmreact_core::geometry::{comparison_envelopes, CurvatureBounds, ModelManifold, Warp};
use pmreact_core::solver::{
    build_initial_data, free_boundary_radius, ground_state, solve_ball, InitialData,
    OutputCadence, RadialGrid, RunVerdict, SolverConfig,
};

fn err(e: pmreact_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Manifold", from_py_object)]
#[derive(Clone)]
struct PyManifold {
    inner: ModelManifold,
}

#[pymethods]
impl PyManifold {
    /// Manifold(dim, kind="hyperbolic", h=1.0) — kind is "euclidean" or
    /// "hyperbolic".
    #[new]
    #[pyo3(signature = (dim, kind = "hyperbolic", h = 1.0))]
    fn new(dim: u32, kind: &str, h: f64) -> PyResult<Self> {
        let warp = match kind {
            "euclidean" => Warp::Euclidean,
            "hyperbolic" => Warp::Hyperbolic { h },
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown warp kind '{other}' (use 'euclidean' or 'hyperbolic')"
                )))
            }
        };
        Ok(PyManifold {
            inner: ModelManifold::new(dim, warp).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim()
    }

    fn radial_drift(&self, r: f64) -> PyResult<f64> {
        self.inner.radial_drift(r).map_err(err)
    }

    fn ricci_radial(&self, r: f64) -> PyResult<f64> {
        self.inner.ricci_radial(r).map_err(err)
    }

    fn sectional_radial(&self, r: f64) -> PyResult<f64> {
        self.inner.sectional_radial(r).map_err(err)
    }

    fn unit_ball_drift_constant(&self) -> PyResult<f64> {
        self.inner.unit_ball_drift_constant().map_err(err)
    }
}

#[pyclass(name = "TimeProfile", from_py_object)]
#[derive(Clone)]
struct PyTimeProfile {
    inner: TimeProfile,
}

fn parse_family(name: &str) -> PyResult<ProfileFamily> {
    Ok(match name {
        "decay-log-power" => ProfileFamily::DecayLogPower,
        "decay-power" => ProfileFamily::DecayPower,
        "growth-power" => ProfileFamily::GrowthPower,
        "growth-exp" => ProfileFamily::GrowthExp,
        "blowup-log" => ProfileFamily::BlowupLog,
        "blowup-power" => ProfileFamily::BlowupPower,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown profile family '{other}'"
            )))
        }
    })
}

#[pymethods]
impl PyTimeProfile {
    /// TimeProfile(family, alpha, beta, m, tau=None, t_end=None).
    #[new]
    #[pyo3(signature = (family, alpha, beta, m, tau = None, t_end = None))]
    fn new(
        family: &str,
        alpha: f64,
        beta: f64,
        m: f64,
        tau: Option<f64>,
        t_end: Option<f64>,
    ) -> PyResult<Self> {
        let family = parse_family(family)?;
        let horizon = match (tau, t_end) {
            (Some(tau), None) => Horizon::Shifted { tau },
            (None, Some(t_end)) => Horizon::Blowup { t_end },
            _ => {
                return Err(PyValueError::new_err(
                    "give exactly one of tau= and t_end=",
                ))
            }
        };
        Ok(PyTimeProfile {
            inner: TimeProfile::new(family, alpha, beta, m, horizon).map_err(err)?,
        })
    }

    fn zeta(&self, t: f64) -> f64 {
        self.inner.zeta(t)
    }

    fn eta(&self, t: f64) -> f64 {
        self.inner.eta(t)
    }

    fn dzeta(&self, t: f64) -> f64 {
        self.inner.dzeta(t)
    }

    fn deta(&self, t: f64) -> f64 {
        self.inner.deta(t)
    }
}

#[pyclass(name = "Barrier", from_py_object)]
#[derive(Clone)]
struct PyBarrier {
    inner: BarrierSpec,
}

#[pymethods]
impl PyBarrier {
    /// Barrier(C, a, profile, p, kind="outer-supersolution").
    #[new]
    #[pyo3(signature = (c, a, profile, p, kind = "outer-supersolution"))]
    fn new(c: f64, a: f64, profile: PyTimeProfile, p: f64, kind: &str) -> PyResult<Self> {
        let kind = match kind {
            "outer-supersolution" => BarrierKind::OuterSupersolution,
            "glued-subsolution" => BarrierKind::GluedSubsolution,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown barrier kind '{other}'"
                )))
            }
        };
        Ok(PyBarrier {
            inner: BarrierSpec::new(c, a, profile.inner, p, kind).map_err(err)?,
        })
    }

    #[getter]
    fn amplitude(&self) -> f64 {
        self.inner.amplitude()
    }

    #[getter]
    fn spatial_scale(&self) -> f64 {
        self.inner.spatial_scale()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.profile().alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.profile().beta()
    }

    /// Shift tau or blow-up time T, whichever the profile carries.
    #[getter]
    fn horizon(&self) -> f64 {
        self.inner
            .profile()
            .tau()
            .or(self.inner.profile().blowup_time())
            .unwrap()
    }

    fn evaluate(&self, r: f64, t: f64) -> PyResult<f64> {
        self.inner.evaluate(r, t).map_err(err)
    }

    fn support_radius(&self, t: f64) -> PyResult<f64> {
        self.inner.support_radius(t).map_err(err)
    }

    fn residual(&self, manifold: &PyManifold, r: f64, t: f64) -> PyResult<f64> {
        self.inner.residual(&manifold.inner, r, t).map_err(err)
    }
}

fn certificate_dict<'py>(py: Python<'py>, cert: &Certificate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("certified", cert.is_certified())?;
    d.set_item("worst_margin", cert.worst_margin())?;
    let conditions: Vec<(String, f64, f64)> = cert
        .conditions
        .iter()
        .map(|c| (c.id.clone(), c.worst_margin, c.argmin_t))
        .collect();
    d.set_item("conditions", conditions)?;
    d.set_item("text", cert.render_text())?;
    Ok(d)
}

/// Certify an outer supersolution barrier under the upper curvature
/// bound h; returns a dict with the verdict and per-condition margins.
#[pyfunction]
#[pyo3(signature = (barrier, dim, h, probes = 1000))]
fn certify_supersolution<'py>(
    py: Python<'py>,
    barrier: &PyBarrier,
    dim: u32,
    h: f64,
    probes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = default_time_grid(barrier.inner.profile(), probes.max(2));
    let cert = check_supersolution(&barrier.inner, dim, h, &grid).map_err(err)?;
    certificate_dict(py, &cert)
}

/// Certify a glued subsolution barrier under the lower curvature bound k.
#[pyfunction]
#[pyo3(signature = (barrier, dim, k, c0, probes = 1000))]
fn certify_subsolution<'py>(
    py: Python<'py>,
    barrier: &PyBarrier,
    dim: u32,
    k: f64,
    c0: f64,
    probes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = default_time_grid(barrier.inner.profile(), probes.max(2));
    let cert = check_subsolution(&barrier.inner, dim, k, c0, &grid).map_err(err)?;
    certificate_dict(py, &cert)
}

/// Synthesize a certified upper barrier; returns (barrier, certificate).
#[pyfunction]
fn synth_supersolution<'py>(
    py: Python<'py>,
    regime: &str,
    m: f64,
    p: f64,
    dim: u32,
    h: f64,
    support_radius: f64,
    data_sup: f64,
) -> PyResult<(PyBarrier, Bound<'py, PyDict>)> {
    let regime = match regime {
        "decay-log-power" => SupersolutionRegime::DecayLogPower,
        "decay-power" => SupersolutionRegime::DecayPower,
        "growth-power" => SupersolutionRegime::GrowthPower,
        "growth-exp" => SupersolutionRegime::GrowthExp,
        other => return Err(PyValueError::new_err(format!("unknown regime '{other}'"))),
    };
    let inputs = SupersolutionInputs {
        m,
        p,
        dim,
        h,
        support_radius,
        data_sup,
    };
    let (spec, cert) = synthesize_supersolution(regime, &inputs).map_err(err)?;
    Ok((PyBarrier { inner: spec }, certificate_dict(py, &cert)?))
}

/// Synthesize a certified lower barrier; returns
/// (barrier, certificate, (min_support_radius, min_value)).
#[pyfunction]
#[pyo3(signature = (regime, m, p, dim, k, c0, alpha, beta = None, spatial_scale = 1.0))]
#[allow(clippy::too_many_arguments)]
fn synth_subsolution<'py>(
    py: Python<'py>,
    regime: &str,
    m: f64,
    p: f64,
    dim: u32,
    k: f64,
    c0: f64,
    alpha: f64,
    beta: Option<f64>,
    spatial_scale: f64,
) -> PyResult<(PyBarrier, Bound<'py, PyDict>, (f64, f64))> {
    let regime = match regime {
        "blowup-log" => SubsolutionRegime::BlowupLog,
        "blowup-power" => SubsolutionRegime::BlowupPower,
        "growth-power" => SubsolutionRegime::GrowthPower,
        other => return Err(PyValueError::new_err(format!("unknown regime '{other}'"))),
    };
    let inputs = SubsolutionInputs {
        m,
        p,
        dim,
        k,
        c0,
        alpha,
        beta,
        spatial_scale,
    };
    let (spec, cert, req) = synthesize_subsolution(regime, &inputs).map_err(err)?;
    Ok((
        PyBarrier { inner: spec },
        certificate_dict(py, &cert)?,
        (req.min_support_radius, req.min_value),
    ))
}

/// Drift envelopes (upper, lower) implied by curvature bounds at radius r.
#[pyfunction]
#[pyo3(signature = (dim, r, k = None, h = None))]
fn drift_envelopes(
    dim: u32,
    r: f64,
    k: Option<f64>,
    h: Option<f64>,
) -> PyResult<(Option<f64>, Option<f64>)> {
    let bounds = CurvatureBounds::new(k, h).map_err(err)?;
    let env = comparison_envelopes(&bounds, dim, r).map_err(err)?;
    Ok((env.upper, env.lower))
}

/// Existence horizon 1/((p-1) sup^(p-1)) of the reaction-only flow.
#[pyfunction]
fn blowup_bound(p: f64, sup0: f64) -> PyResult<f64> {
    ode_blowup_bound(p, sup0).map_err(err)
}

/// Tabulated hyperbolic ground state; returns (radii, values, lambda1).
#[pyfunction]
#[pyo3(signature = (dim, h, r_max, points = 1001))]
fn ground_state_table(
    dim: u32,
    h: f64,
    r_max: f64,
    points: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let gs = ground_state(dim, h, r_max, points).map_err(err)?;
    Ok((gs.radii().to_vec(), gs.values().to_vec(), gs.lambda1()))
}

/// Run the Dirichlet problem on a ball with bump, annulus or barrier
/// data; returns a dict with the recorded series and the verdict.
#[pyfunction]
#[pyo3(signature = (manifold, m, p, r_max, n_cells, t_end, initial,
                    cfl_safety = 0.4, blowup_threshold = 1e8,
                    include_reaction = true, ticks = 100))]
#[allow(clippy::too_many_arguments)]
fn run_ball<'py>(
    py: Python<'py>,
    manifold: &PyManifold,
    m: f64,
    p: f64,
    r_max: f64,
    n_cells: usize,
    t_end: f64,
    initial: Bound<'py, PyDict>,
    cfl_safety: f64,
    blowup_threshold: f64,
    include_reaction: bool,
    ticks: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: String = initial
        .get_item("kind")?
        .ok_or_else(|| PyValueError::new_err("initial data needs a 'kind' key"))?
        .extract()?;
    let get = |key: &str| -> PyResult<f64> {
        initial
            .get_item(key)?
            .ok_or_else(|| PyValueError::new_err(format!("initial data needs '{key}'")))?
            .extract()
    };
    let data = match kind.as_str() {
        "bump" => InitialData::Bump {
            radius: get("radius")?,
            height: get("height")?,
        },
        "annulus" => InitialData::Annulus {
            inner: get("inner")?,
            outer: get("outer")?,
            height: get("height")?,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown initial data kind '{other}'"
            )))
        }
    };
    let grid = RadialGrid::new(&manifold.inner, r_max, n_cells).map_err(err)?;
    let u0 = build_initial_data(&data, &grid).map_err(err)?;
    let config = SolverConfig {
        cfl_safety,
        blowup_threshold,
        include_reaction,
        output_cadence: OutputCadence::Uniform {
            dt: t_end / ticks.max(1) as f64,
        },
        ..SolverConfig::default()
    };
    let report = solve_ball(&u0, m, p, t_end, &config).map_err(err)?;

    let d = PyDict::new(py);
    d.set_item("t", report.series.iter().map(|r| r.t).collect::<Vec<_>>())?;
    d.set_item(
        "sup_norm",
        report.series.iter().map(|r| r.sup_norm).collect::<Vec<_>>(),
    )?;
    d.set_item(
        "mass",
        report.series.iter().map(|r| r.mass).collect::<Vec<_>>(),
    )?;
    d.set_item(
        "free_boundary",
        report
            .series
            .iter()
            .map(|r| r.free_boundary)
            .collect::<Vec<_>>(),
    )?;
    let (verdict, when) = match report.verdict {
        RunVerdict::Completed { t_end } => ("completed", t_end),
        RunVerdict::BlowupDetected { t_star } => ("blowup-detected", t_star),
        RunVerdict::StepLimitReached { t } => ("step-limit-reached", t),
    };
    d.set_item("verdict", verdict)?;
    d.set_item("verdict_time", when)?;
    let _ = free_boundary_radius; // re-exported through the series
    Ok(d)
}

#[pymodule]
fn pmreact(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyManifold>()?;
    m.add_class::<PyTimeProfile>()?;
    m.add_class::<PyBarrier>()?;
    m.add_function(wrap_pyfunction!(certify_supersolution, m)?)?;
    m.add_function(wrap_pyfunction!(certify_subsolution, m)?)?;
    m.add_function(wrap_pyfunction!(synth_supersolution, m)?)?;
    m.add_function(wrap_pyfunction!(synth_subsolution, m)?)?;
    m.add_function(wrap_pyfunction!(drift_envelopes, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_bound, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_ball, m)?)?;
    Ok(())
}
