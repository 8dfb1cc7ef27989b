//! Radial ground state of the Laplacian on constant-curvature hyperbolic
//! space: the positive, radially decreasing solution of
//! `v'' + (N-1) h coth(h r) v' + lambda1 v = 0`, `v(0) = 1`, `v'(0) = 0`,
//! with `lambda1 = (N-1)^2 h^2 / 4` the bottom of the spectrum.
//!
//! For `m = p` the function `v^(1/m)` is a stationary upper barrier
//! whenever `lambda1 >= 1`.

use crate::error::{Error, Result};

/// `lambda1 = (N-1)^2 h^2 / 4`.
pub fn principal_eigenvalue(dim: u32, h: f64) -> f64 {
    let s = (dim - 1) as f64 * h / 2.0;
    s * s
}

/// Tabulated ground state on `[0, r_max]`, normalized to `v(0) = 1`.
#[derive(Clone, Debug)]
pub struct GroundState {
    dim: u32,
    h: f64,
    lambda1: f64,
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl GroundState {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation of the table.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let r_max = *self.radii.last().unwrap();
        if !(r >= 0.0 && r <= r_max) {
            return Err(Error::Domain(format!(
                "ground state tabulated on [0, {r_max}], asked at {r}"
            )));
        }
        let dr = self.radii[1] - self.radii[0];
        let idx = ((r / dr) as usize).min(self.radii.len() - 2);
        let frac = (r - self.radii[idx]) / dr;
        Ok(self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac)
    }

    /// Stationary upper barrier `v^(1/m)` at radius `r`.
    pub fn stationary_barrier(&self, m: f64, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.powf(1.0 / m))
    }
}

/// Integrates the ground-state equation with classical RK4, starting from
/// the even-order series at the origin and keeping the substep below
/// `r / 8` so the `1/r` drift stays resolved. Errors if the computed table
/// loses positivity or monotonicity, which signals integration failure.
pub fn ground_state(dim: u32, h: f64, r_max: f64, n_points: usize) -> Result<GroundState> {
    if dim < 2 {
        return Err(Error::Contract(format!("needs N >= 2, got {dim}")));
    }
    if !(h > 0.0) || !(r_max > 0.0) {
        return Err(Error::Contract("needs h > 0 and r_max > 0".into()));
    }
    if n_points < 8 {
        return Err(Error::Contract(format!(
            "needs at least 8 table points, got {n_points}"
        )));
    }
    let lambda1 = principal_eigenvalue(dim, h);
    let nm1 = (dim - 1) as f64;
    let drift = |r: f64| nm1 * h / (h * r).tanh();
    let rhs = |r: f64, v: f64, w: f64| (w, -drift(r) * w - lambda1 * v);

    // Even series v = 1 + a1 r^2 + a2 r^4 near the origin.
    let a1 = -lambda1 / (2.0 * dim as f64);
    let a2 = -a1 * (lambda1 + 2.0 * nm1 * h * h / 3.0) / (4.0 * dim as f64 + 8.0);
    let series_v = |r: f64| 1.0 + a1 * r * r + a2 * r.powi(4);
    let series_w = |r: f64| 2.0 * a1 * r + 4.0 * a2 * r.powi(3);

    let dr_table = r_max / (n_points - 1) as f64;
    let mut radii = Vec::with_capacity(n_points);
    let mut values = Vec::with_capacity(n_points);
    radii.push(0.0);
    values.push(1.0);

    let r_start = 1e-3_f64.min(0.1 * dr_table);
    let mut r = r_start;
    let mut v = series_v(r);
    let mut w = series_w(r);
    let h_max = 1e-3_f64.min(dr_table / 4.0).max(1e-6);

    for j in 1..n_points {
        let target = j as f64 * dr_table;
        while r < target - 1e-15 * r_max {
            let step = h_max.min(r / 8.0).min(target - r);
            let (k1v, k1w) = rhs(r, v, w);
            let (k2v, k2w) = rhs(r + 0.5 * step, v + 0.5 * step * k1v, w + 0.5 * step * k1w);
            let (k3v, k3w) = rhs(r + 0.5 * step, v + 0.5 * step * k2v, w + 0.5 * step * k2w);
            let (k4v, k4w) = rhs(r + step, v + step * k3v, w + step * k3w);
            v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            w += step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            r += step;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "ground state lost positivity near r = {target}: v = {v}"
            )));
        }
        radii.push(target);
        values.push(v);
    }

    for win in values.windows(2) {
        if win[1] > win[0] * (1.0 + 1e-12) {
            return Err(Error::Domain(
                "ground state is not radially nonincreasing; integration failed".into(),
            ));
        }
    }

    Ok(GroundState {
        dim,
        h,
        lambda1,
        radii,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(principal_eigenvalue(3, 1.0), 1.0);
        assert_eq!(principal_eigenvalue(3, 2.0), 4.0);
    }

    #[test]
    fn matches_closed_form_on_three_dimensional_space() {
        // v(r) = r / sinh(r) solves the equation for N = 3, h = 1.
        let gs = ground_state(3, 1.0, 10.0, 2001).unwrap();
        for (r, v) in gs.radii().iter().zip(gs.values()) {
            let exact = if *r == 0.0 { 1.0 } else { r / r.sinh() };
            assert!(
                (v - exact).abs() <= 1e-8,
                "r = {r}: v = {v}, exact = {exact}"
            );
        }
        let sample = gs.eval(2.0).unwrap();
        assert!((sample - 2.0 / 2f64.sinh()).abs() < 1e-7);
    }

    #[test]
    fn closed_form_satisfies_the_equation() {
        // Independent check that the reference function used above solves
        // v'' + 2 coth(r) v' + v = 0.
        for r in [0.5, 1.0, 2.0, 5.0] {
            let hstep = 1e-4;
            let f = |r: f64| r / r.sinh();
            let d1 = (f(r + hstep) - f(r - hstep)) / (2.0 * hstep);
            let d2 = (f(r + hstep) - 2.0 * f(r) + f(r - hstep)) / (hstep * hstep);
            let residual = d2 + 2.0 / r.tanh() * d1 + f(r);
            assert!(residual.abs() < 1e-5, "r = {r}: residual = {residual}");
        }
    }

    #[test]
    fn stationary_barrier_residual_sign() {
        // For h = 2, N = 3: lambda1 = 4, so the stationary residual
        // (lambda1 - 1) v is positive at every table point.
        let gs = ground_state(3, 2.0, 8.0, 801).unwrap();
        for &v in gs.values() {
            assert!((gs.lambda1() - 1.0) * v > 0.0);
        }
    }

    #[test]
    fn table_is_positive_and_decreasing() {
        let gs = ground_state(4, 0.7, 12.0, 601).unwrap();
        assert_eq!(gs.values()[0], 1.0);
        for win in gs.values().windows(2) {
            assert!(win[1] > 0.0 && win[1] <= win[0]);
        }
    }
}
