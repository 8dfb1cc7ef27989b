//! Explicit conservative finite-volume solver for the radial problem
//! `u_t = A^{-1} (A (u^m)_r)_r + u^p` on `[0, R_max]` with a homogeneous
//! Dirichlet condition at `R_max`.
//!
//! The flux form absorbs the drift singularity at the origin: the inner
//! face of the first cell has zero area, which enforces the symmetry
//! condition without special-casing. Time steps follow a positivity
//! contract combining the diffusion and reaction scales; the scheme is
//! monotone under that contract, which is what the comparison-based tests
//! lean on. Runs are single-threaded and deterministic.

mod ground_state;

pub use ground_state::{ground_state, principal_eigenvalue, GroundState};

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::barrier::BarrierSpec;
use crate::error::{Error, Result};
use crate::geometry::ModelManifold;

/// Cell-centered radial grid with face areas and exact cell volumes.
#[derive(Clone, Debug)]
pub struct RadialGrid {
    manifold: ModelManifold,
    r_max: f64,
    n_cells: usize,
    dr: f64,
    face_areas: Vec<f64>,
    volumes: Vec<f64>,
    max_drift: f64,
}

impl RadialGrid {
    pub fn new(manifold: &ModelManifold, r_max: f64, n_cells: usize) -> Result<Arc<Self>> {
        if n_cells < 16 {
            return Err(Error::Contract(format!(
                "grid needs at least 16 cells, got {n_cells}"
            )));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Contract(format!("grid needs R_max > 0, got {r_max}")));
        }
        let dr = r_max / n_cells as f64;
        let mut face_areas = Vec::with_capacity(n_cells + 1);
        for i in 0..=n_cells {
            let area = manifold.area(i as f64 * dr);
            if !area.is_finite() {
                return Err(Error::InvalidManifold(format!(
                    "face area overflows at r = {}",
                    i as f64 * dr
                )));
            }
            face_areas.push(area);
        }
        for i in 1..=n_cells {
            if !(face_areas[i] > face_areas[i - 1]) {
                return Err(Error::InvalidManifold(
                    "face areas must increase with radius".into(),
                ));
            }
        }
        let mut volumes = Vec::with_capacity(n_cells);
        for i in 0..n_cells {
            let vol = cell_volume(manifold, i as f64 * dr, (i + 1) as f64 * dr);
            if !(vol > 0.0) || !vol.is_finite() {
                return Err(Error::InvalidManifold(format!(
                    "cell volume not positive at cell {i}"
                )));
            }
            volumes.push(vol);
        }
        let mut max_drift: f64 = 0.0;
        for i in 0..n_cells {
            max_drift = max_drift.max(manifold.radial_drift((i as f64 + 0.5) * dr)?);
        }
        Ok(Arc::new(RadialGrid {
            manifold: manifold.clone(),
            r_max,
            n_cells,
            dr,
            face_areas,
            volumes,
            max_drift,
        }))
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }
}

/// Exact warped volume of `[r_lo, r_hi]` where closed forms exist
/// (Euclidean powers, hyperbolic sinh powers in dimensions 2 and 3),
/// midpoint rule otherwise.
fn cell_volume(manifold: &ModelManifold, r_lo: f64, r_hi: f64) -> f64 {
    use crate::geometry::Warp;
    let n = manifold.dim();
    match manifold.warp() {
        Warp::Euclidean => (r_hi.powi(n as i32) - r_lo.powi(n as i32)) / n as f64,
        Warp::Hyperbolic { h } if n == 2 => ((h * r_hi).cosh() - (h * r_lo).cosh()) / (h * h),
        Warp::Hyperbolic { h } if n == 3 => {
            let anti = |r: f64| (2.0 * h * r).sinh() / (4.0 * h) - r / 2.0;
            (anti(r_hi) - anti(r_lo)) / (h * h)
        }
        _ => manifold.area(0.5 * (r_lo + r_hi)) * (r_hi - r_lo),
    }
}

/// Cell-averaged nonnegative state on a radial grid.
#[derive(Clone, Debug)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialField {
    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let values = vec![0.0; grid.n_cells()];
        RadialField { grid, values }
    }

    /// Samples `f` at cell centers (midpoint-rule cell averages).
    pub fn from_fn(grid: Arc<RadialGrid>, mut f: impl FnMut(f64) -> f64) -> Self {
        let values = (0..grid.n_cells())
            .map(|i| f(grid.cell_center(i)))
            .collect();
        RadialField { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.volumes())
            .map(|(u, v)| u * v)
            .sum()
    }
}

/// Shapes of initial data.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    /// `height * (1 - (r/radius)^2)_+`.
    Bump { radius: f64, height: f64 },
    /// Constant `height` on `[inner, outer]`.
    Annulus { inner: f64, outer: f64, height: f64 },
    /// Barrier profile sampled at t = 0.
    BarrierProfile { spec: BarrierSpec },
}

/// Builds cell data for the requested shape.
pub fn build_initial_data(data: &InitialData, grid: &Arc<RadialGrid>) -> Result<RadialField> {
    match data {
        InitialData::Bump { radius, height } => {
            if !(*radius > 0.0 && *radius < grid.r_max()) {
                return Err(Error::Contract(format!(
                    "bump radius {radius} outside the grid (R_max = {})",
                    grid.r_max()
                )));
            }
            if !(*height >= 0.0) {
                return Err(Error::Contract("bump height must be nonnegative".into()));
            }
            Ok(RadialField::from_fn(grid.clone(), |r| {
                height * (1.0 - (r / radius).powi(2)).max(0.0)
            }))
        }
        InitialData::Annulus {
            inner,
            outer,
            height,
        } => {
            if !(*inner >= 0.0 && inner < outer && *outer <= grid.r_max()) {
                return Err(Error::Contract(format!(
                    "annulus [{inner}, {outer}] outside the grid (R_max = {})",
                    grid.r_max()
                )));
            }
            if !(*height >= 0.0) {
                return Err(Error::Contract("annulus height must be nonnegative".into()));
            }
            Ok(RadialField::from_fn(grid.clone(), |r| {
                if r >= *inner && r <= *outer {
                    *height
                } else {
                    0.0
                }
            }))
        }
        InitialData::BarrierProfile { spec } => {
            let mut values = Vec::with_capacity(grid.n_cells());
            for i in 0..grid.n_cells() {
                values.push(spec.evaluate(grid.cell_center(i), 0.0)?);
            }
            Ok(RadialField {
                grid: grid.clone(),
                values,
            })
        }
    }
}

/// Output tick schedule.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OutputCadence {
    /// One hundred uniform ticks across the run.
    Auto,
    Uniform { dt: f64 },
    /// Ticks at `first * factor^k`; suits runs spanning many decades.
    Geometric { first: f64, factor: f64 },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Fraction of the stability bound actually used.
    pub cfl_safety: f64,
    /// Sup-norm level at which a run is declared blown up.
    pub blowup_threshold: f64,
    pub max_steps: u64,
    pub output_cadence: OutputCadence,
    /// Disables the reaction term (pure porous-medium runs).
    pub include_reaction: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl_safety: 0.4,
            blowup_threshold: 1e8,
            max_steps: 100_000_000,
            output_cadence: OutputCadence::Auto,
            include_reaction: true,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::Contract(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(Error::Contract("blowup_threshold must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub sup_norm: f64,
    pub mass: f64,
    pub free_boundary: f64,
    pub dt: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunVerdict {
    Completed { t_end: f64 },
    BlowupDetected { t_star: f64 },
    StepLimitReached { t: f64 },
}

impl fmt::Display for RunVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunVerdict::Completed { t_end } => write!(f, "verdict: completed\nt_end: {t_end:.16e}"),
            RunVerdict::BlowupDetected { t_star } => {
                write!(f, "verdict: blow-up detected\nt_star: {t_star:.16e}")
            }
            RunVerdict::StepLimitReached { t } => {
                write!(f, "verdict: step limit reached\nt: {t:.16e}")
            }
        }
    }
}

/// Time series of a run plus its terminal verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub series: Vec<SeriesRow>,
    pub verdict: RunVerdict,
}

impl RunReport {
    /// CSV with 17 significant digits per value.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(out, "t,sup_norm,mass,free_boundary,dt").unwrap();
        for row in &self.series {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                row.t, row.sup_norm, row.mass, row.free_boundary, row.dt
            )
            .unwrap();
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn write_verdict(&self, path: &Path) -> Result<()> {
        std::fs::write(path, format!("{}\n", self.verdict)).map_err(|e| Error::io(path, e))
    }
}

/// Largest face radius whose inner cell exceeds `threshold`
/// (default `1e-12 * sup_norm`); zero when every cell is at or below it.
pub fn free_boundary_radius(field: &RadialField, threshold: Option<f64>) -> f64 {
    let threshold = threshold.unwrap_or(1e-12 * field.sup_norm());
    let grid = field.grid();
    field
        .values()
        .iter()
        .rposition(|&u| u > threshold)
        .map_or(0.0, |i| (i + 1) as f64 * grid.dr())
}

/// Positivity-preserving step size for the current state.
fn stable_dt(field: &RadialField, m: f64, p: f64, config: &SolverConfig) -> f64 {
    let grid = field.grid();
    let max_u = field.sup_norm();
    if max_u <= 0.0 {
        return grid.dr() * grid.dr();
    }
    let dr = grid.dr();
    let dt_diff =
        dr * dr / (2.0 * m * max_u.powf(m - 1.0) * (1.0 + dr * grid.max_drift));
    let dt = if config.include_reaction {
        dt_diff.min(1.0 / (2.0 * p * max_u.powf(p - 1.0)))
    } else {
        dt_diff
    };
    config.cfl_safety * dt
}

/// Advances `values` one explicit Euler step of size `dt` in flux form.
/// Returns the index of the first non-finite cell, if any.
fn advance(
    grid: &RadialGrid,
    values: &mut [f64],
    fluxes: &mut [f64],
    m: f64,
    p: f64,
    include_reaction: bool,
    dt: f64,
) -> Option<usize> {
    let n = grid.n_cells();
    let dr = grid.dr();
    // Diffusive flux at interior faces; zero-area inner face and Dirichlet
    // ghost (u = 0 beyond R_max) at the ends.
    fluxes[0] = 0.0;
    for i in 1..n {
        let phi_hi = values[i].powf(m);
        let phi_lo = values[i - 1].powf(m);
        fluxes[i] = grid.face_areas[i] * (phi_hi - phi_lo) / dr;
    }
    fluxes[n] = grid.face_areas[n] * (0.0 - values[n - 1].powf(m)) / dr;
    for i in 0..n {
        let mut du = (fluxes[i + 1] - fluxes[i]) / grid.volumes[i];
        if include_reaction {
            du += values[i].powf(p);
        }
        let next = values[i] + dt * du;
        if !next.is_finite() {
            return Some(i);
        }
        values[i] = next.max(0.0);
    }
    None
}

/// One explicit step; returns the new field and the dt used.
pub fn step(
    field: &RadialField,
    m: f64,
    p: f64,
    config: &SolverConfig,
) -> Result<(RadialField, f64)> {
    config.validate()?;
    if !(m > 1.0 && p > 1.0) {
        return Err(Error::Contract(format!("needs m, p > 1, got m={m}, p={p}")));
    }
    let dt = stable_dt(field, m, p, config);
    let mut next = field.clone();
    let mut fluxes = vec![0.0; field.grid().n_cells() + 1];
    if let Some(cell) = advance(
        field.grid(),
        &mut next.values,
        &mut fluxes,
        m,
        p,
        config.include_reaction,
        dt,
    ) {
        return Err(Error::Numerical {
            cell,
            time: dt,
            detail: "non-finite value after one step".into(),
        });
    }
    Ok((next, dt))
}

struct Ticks {
    times: Vec<f64>,
    next: usize,
}

impl Ticks {
    fn new(cadence: OutputCadence, t_end: f64) -> Ticks {
        let mut times = Vec::new();
        match cadence {
            OutputCadence::Auto => {
                for k in 1..=100 {
                    times.push(t_end * k as f64 / 100.0);
                }
            }
            OutputCadence::Uniform { dt } => {
                let mut t = dt;
                while t < t_end && times.len() < 2_000_000 {
                    times.push(t);
                    t += dt;
                }
                times.push(t_end);
            }
            OutputCadence::Geometric { first, factor } => {
                let mut t = first;
                while t < t_end && times.len() < 2_000_000 {
                    times.push(t);
                    t *= factor;
                }
                times.push(t_end);
            }
        }
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * t_end);
        Ticks { times, next: 0 }
    }

    fn next_after(&mut self, t: f64) -> Option<f64> {
        while self.next < self.times.len() && self.times[self.next] <= t {
            self.next += 1;
        }
        self.times.get(self.next).copied()
    }
}

/// Runs the Dirichlet problem on the field's ball until `t_end`, blow-up
/// or the step limit, recording the series at the cadence ticks and
/// passing each recorded state to `observer`.
pub fn solve_ball_observed(
    u0: &RadialField,
    m: f64,
    p: f64,
    t_end: f64,
    config: &SolverConfig,
    mut observer: impl FnMut(f64, &RadialField),
) -> Result<RunReport> {
    config.validate()?;
    if !(t_end > 0.0) {
        return Err(Error::Contract(format!("needs t_end > 0, got {t_end}")));
    }
    if !(m > 1.0 && p > 1.0) {
        return Err(Error::Contract(format!("needs m, p > 1, got m={m}, p={p}")));
    }
    let mut field = u0.clone();
    let grid = field.grid().clone();
    let mut fluxes = vec![0.0; grid.n_cells() + 1];
    let mut ticks = Ticks::new(config.output_cadence, t_end);
    let mut series = Vec::new();
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let record =
        |series: &mut Vec<SeriesRow>, t: f64, field: &RadialField, dt: f64| {
            series.push(SeriesRow {
                t,
                sup_norm: field.sup_norm(),
                mass: field.mass(),
                free_boundary: free_boundary_radius(field, None),
                dt,
            });
        };
    record(&mut series, 0.0, &field, 0.0);
    observer(0.0, &field);

    let verdict = loop {
        let last_dt = series.last().map_or(0.0, |r| r.dt);
        if field.sup_norm() > config.blowup_threshold {
            record(&mut series, t, &field, last_dt);
            observer(t, &field);
            break RunVerdict::BlowupDetected { t_star: t };
        }
        if t >= t_end {
            break RunVerdict::Completed { t_end };
        }
        if steps >= config.max_steps {
            record(&mut series, t, &field, last_dt);
            break RunVerdict::StepLimitReached { t };
        }
        let mut dt = stable_dt(&field, m, p, config).min(t_end - t);
        let tick = ticks.next_after(t);
        if let Some(tick_t) = tick {
            dt = dt.min(tick_t - t);
        }
        if let Some(cell) = advance(
            &grid,
            &mut field.values,
            &mut fluxes,
            m,
            p,
            config.include_reaction,
            dt,
        ) {
            return Err(Error::Numerical {
                cell,
                time: t,
                detail: "non-finite value during the run".into(),
            });
        }
        t += dt;
        steps += 1;
        if let Some(tick_t) = tick {
            if t + 1e-15 * t_end >= tick_t {
                record(&mut series, tick_t, &field, dt);
                observer(tick_t, &field);
            }
        }
    };
    Ok(RunReport { series, verdict })
}

/// `solve_ball_observed` without an observer.
pub fn solve_ball(
    u0: &RadialField,
    m: f64,
    p: f64,
    t_end: f64,
    config: &SolverConfig,
) -> Result<RunReport> {
    solve_ball_observed(u0, m, p, t_end, config, |_, _| {})
}

/// One ball of an exhaustion family: its report and the recorded states.
pub struct ExhaustionRun {
    pub radius: f64,
    pub report: RunReport,
    pub snapshots: Vec<(f64, RadialField)>,
}

/// Solves the same problem on an increasing family of balls with identical
/// spacing, advancing every ball with the shared (minimum) step size so
/// the discrete states are comparable at matched times.
pub fn solve_exhaustion(
    data: &InitialData,
    manifold: &ModelManifold,
    m: f64,
    p: f64,
    r_list: &[f64],
    n_cells_first: usize,
    t_end: f64,
    config: &SolverConfig,
) -> Result<Vec<ExhaustionRun>> {
    config.validate()?;
    if r_list.is_empty() {
        return Err(Error::Contract("exhaustion needs at least one radius".into()));
    }
    if !r_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Contract("exhaustion radii must be increasing".into()));
    }
    let dr = r_list[0] / n_cells_first as f64;
    let support_sup = match data {
        InitialData::Bump { radius, .. } => *radius,
        InitialData::Annulus { outer, .. } => *outer,
        InitialData::BarrierProfile { spec } => spec.support_radius(0.0)?,
    };
    if !(support_sup < r_list[0]) {
        return Err(Error::Contract(format!(
            "data support (radius {support_sup}) must lie inside the smallest ball {}",
            r_list[0]
        )));
    }

    struct Lane {
        radius: f64,
        field: RadialField,
        fluxes: Vec<f64>,
        series: Vec<SeriesRow>,
        snapshots: Vec<(f64, RadialField)>,
    }
    let mut lanes = Vec::new();
    for &radius in r_list {
        let n = (radius / dr).round() as usize;
        let grid = RadialGrid::new(manifold, n as f64 * dr, n)?;
        let field = build_initial_data(data, &grid)?;
        let fluxes = vec![0.0; n + 1];
        lanes.push(Lane {
            radius,
            field,
            fluxes,
            series: Vec::new(),
            snapshots: Vec::new(),
        });
    }

    let mut ticks = Ticks::new(config.output_cadence, t_end);
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let record_all = |lanes: &mut Vec<Lane>, t: f64, dt: f64| {
        for lane in lanes.iter_mut() {
            lane.series.push(SeriesRow {
                t,
                sup_norm: lane.field.sup_norm(),
                mass: lane.field.mass(),
                free_boundary: free_boundary_radius(&lane.field, None),
                dt,
            });
            lane.snapshots.push((t, lane.field.clone()));
        }
    };
    record_all(&mut lanes, 0.0, 0.0);

    let mut blown = false;
    while t < t_end && steps < config.max_steps && !blown {
        let mut dt = lanes
            .iter()
            .map(|lane| stable_dt(&lane.field, m, p, config))
            .fold(f64::INFINITY, f64::min)
            .min(t_end - t);
        let tick = ticks.next_after(t);
        if let Some(tick_t) = tick {
            dt = dt.min(tick_t - t);
        }
        for lane in lanes.iter_mut() {
            let lane_grid = lane.field.grid().clone();
            if let Some(cell) = advance(
                &lane_grid,
                &mut lane.field.values,
                &mut lane.fluxes,
                m,
                p,
                config.include_reaction,
                dt,
            ) {
                return Err(Error::Numerical {
                    cell,
                    time: t,
                    detail: format!("non-finite value on the ball of radius {}", lane.radius),
                });
            }
        }
        t += dt;
        steps += 1;
        if let Some(tick_t) = tick {
            if t + 1e-15 * t_end >= tick_t {
                record_all(&mut lanes, tick_t, dt);
            }
        }
        blown = lanes
            .iter()
            .any(|lane| lane.field.sup_norm() > config.blowup_threshold);
    }

    Ok(lanes
        .into_iter()
        .map(|lane| {
            let sup = lane.field.sup_norm();
            let verdict = if sup > config.blowup_threshold {
                RunVerdict::BlowupDetected { t_star: t }
            } else if t >= t_end {
                RunVerdict::Completed { t_end }
            } else {
                RunVerdict::StepLimitReached { t }
            };
            ExhaustionRun {
                radius: lane.radius,
                report: RunReport {
                    series: lane.series,
                    verdict,
                },
                snapshots: lane.snapshots,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn euclidean_grid(r_max: f64, n: usize) -> Arc<RadialGrid> {
        let manifold = ModelManifold::euclidean(3).unwrap();
        RadialGrid::new(&manifold, r_max, n).unwrap()
    }

    #[test]
    fn zero_field_is_a_fixed_point() {
        let grid = euclidean_grid(4.0, 64);
        let zero = RadialField::zeros(grid);
        let (next, dt) = step(&zero, 2.0, 2.0, &SolverConfig::default()).unwrap();
        assert!(dt > 0.0);
        assert!(next.values().iter().all(|&u| u == 0.0));
        let report = solve_ball(&zero, 2.0, 2.0, 1.0, &SolverConfig::default()).unwrap();
        assert!(matches!(report.verdict, RunVerdict::Completed { .. }));
        assert!(report.series.iter().all(|r| r.sup_norm == 0.0 && r.mass == 0.0));
    }

    #[test]
    fn constant_interior_cell_sees_pure_reaction() {
        // Fluxes cancel on constant data away from the boundary.
        let grid = euclidean_grid(50.0, 64);
        let c = 0.7;
        let field = RadialField::from_fn(grid, |_| c);
        let (next, dt) = step(&field, 2.0, 2.0, &SolverConfig::default()).unwrap();
        let mid = 20;
        let expected = c + dt * c.powi(2);
        assert_relative_eq!(next.values()[mid], expected, max_relative = 1e-14);
    }

    #[test]
    fn bump_examples() {
        let grid = euclidean_grid(4.0, 128);
        let field = build_initial_data(
            &InitialData::Bump {
                radius: 1.0,
                height: 1.0,
            },
            &grid,
        )
        .unwrap();
        let first_center = grid.cell_center(0);
        assert_relative_eq!(
            field.values()[0],
            1.0 - first_center * first_center,
            max_relative = 1e-14
        );
        for (i, &u) in field.values().iter().enumerate() {
            if grid.cell_center(i) > 1.0 {
                assert_eq!(u, 0.0);
            }
        }
        // Support edge within one cell of the bump radius.
        let fb = free_boundary_radius(&field, Some(0.0));
        assert!(fb >= 1.0 - grid.dr() && fb <= 1.0 + grid.dr());
    }

    #[test]
    fn invalid_data_parameters_error() {
        let grid = euclidean_grid(4.0, 64);
        assert!(build_initial_data(
            &InitialData::Bump {
                radius: 5.0,
                height: 1.0
            },
            &grid
        )
        .is_err());
        assert!(build_initial_data(
            &InitialData::Annulus {
                inner: 2.0,
                outer: 1.0,
                height: 1.0
            },
            &grid
        )
        .is_err());
    }

    #[test]
    fn mass_conserved_without_reaction() {
        let manifold = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let grid = RadialGrid::new(&manifold, 8.0, 128).unwrap();
        let field = build_initial_data(
            &InitialData::Bump {
                radius: 1.0,
                height: 1.0,
            },
            &grid,
        )
        .unwrap();
        let config = SolverConfig {
            include_reaction: false,
            ..SolverConfig::default()
        };
        let mut current = field;
        let mass0 = current.mass();
        for _ in 0..200 {
            let (next, _) = step(&current, 2.0, 2.0, &config).unwrap();
            let mass1 = next.mass();
            assert_relative_eq!(mass1, mass0, max_relative = 1e-10);
            assert!(mass1 <= mass0 * (1.0 + 1e-12));
            current = next;
        }
        // Support stayed well away from the boundary.
        assert!(free_boundary_radius(&current, None) < 8.0 - 3.0 * current.grid().dr());
    }

    #[test]
    fn positivity_on_randomized_fields() {
        // Deterministic xorshift fill; one step must stay nonnegative.
        let grid = euclidean_grid(4.0, 64);
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut rand01 = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let field = RadialField {
                grid: grid.clone(),
                values: (0..64).map(|_| 2.0 * rand01()).collect(),
            };
            let (next, _) = step(&field, 2.5, 1.7, &SolverConfig::default()).unwrap();
            assert!(next.values().iter().all(|&u| u >= 0.0));
        }
    }

    #[test]
    fn annulus_reaction_blows_up_near_ode_time() {
        // Flat-top data of height 1 with p = 2: the reaction flow diverges
        // at t = 1; diffusion only delays the numerical blow-up.
        let manifold = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let grid = RadialGrid::new(&manifold, 5.0, 512).unwrap();
        let field = build_initial_data(
            &InitialData::Annulus {
                inner: 2.0,
                outer: 3.0,
                height: 1.0,
            },
            &grid,
        )
        .unwrap();
        let config = SolverConfig {
            blowup_threshold: 1e8,
            output_cadence: OutputCadence::Uniform { dt: 0.05 },
            ..SolverConfig::default()
        };
        let report = solve_ball(&field, 2.0, 2.0, 2.0, &config).unwrap();
        let RunVerdict::BlowupDetected { t_star } = report.verdict else {
            panic!("expected blow-up, got {:?}", report.verdict);
        };
        assert!(t_star >= 0.5 && t_star <= 1.1, "t_star = {t_star}");
        // Sup-norm growth is monotone near the end.
        let tail: Vec<_> = report.series.iter().rev().take(5).collect();
        for w in tail.windows(2) {
            assert!(w[0].sup_norm >= w[1].sup_norm);
        }
    }

    #[test]
    fn free_boundary_of_zero_field_is_zero() {
        let grid = euclidean_grid(4.0, 64);
        let zero = RadialField::zeros(grid);
        assert_eq!(free_boundary_radius(&zero, None), 0.0);
    }

    #[test]
    fn exhaustion_rejects_bad_radii() {
        let manifold = ModelManifold::euclidean(3).unwrap();
        let data = InitialData::Bump {
            radius: 1.0,
            height: 1.0,
        };
        assert!(solve_exhaustion(
            &data,
            &manifold,
            2.0,
            2.0,
            &[],
            64,
            1.0,
            &SolverConfig::default()
        )
        .is_err());
        assert!(solve_exhaustion(
            &data,
            &manifold,
            2.0,
            2.0,
            &[8.0, 4.0],
            64,
            1.0,
            &SolverConfig::default()
        )
        .is_err());
    }
}
