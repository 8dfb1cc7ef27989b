//! Rotationally symmetric model manifolds and Laplacian comparison data.
//!
//! A model manifold is determined by its dimension `N` and a warping
//! function `psi` with `psi(0) = 0`, `psi'(0) = 1`, `psi > 0` on `(0, inf)`.
//! The radial part of the Laplace-Beltrami operator is
//! `d^2/dr^2 + m(r) d/dr` with drift coefficient
//! `m(r) = (N-1) psi'(r) / psi(r)`, and the radial Ricci curvature is
//! `-(N-1) psi''(r) / psi(r)`. Nonpositive sectional curvature is
//! equivalent to `psi'' >= 0`, and every manifold constructed here is
//! validated against that requirement.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::util::logspace;

/// Radius below which the drift is evaluated through its leading-order
/// expansion `(N-1)/r` instead of the warp ratio.
const DRIFT_SERIES_RADIUS: f64 = 1e-12;

/// Closed-form radial function used by custom warps.
pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Warping function of a model manifold.
#[derive(Clone)]
pub enum Warp {
    /// `psi(r) = r`; flat space.
    Euclidean,
    /// `psi(r) = sinh(h r) / h`; constant sectional curvature `-h^2`.
    Hyperbolic { h: f64 },
    /// Arbitrary closed-form warp supplied together with its first two
    /// derivatives. The triple is cross-checked at construction.
    Custom {
        psi: RadialFn,
        dpsi: RadialFn,
        d2psi: RadialFn,
    },
}

impl fmt::Debug for Warp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warp::Euclidean => write!(f, "Euclidean"),
            Warp::Hyperbolic { h } => write!(f, "Hyperbolic {{ h: {h} }}"),
            Warp::Custom { .. } => write!(f, "Custom {{ .. }}"),
        }
    }
}

/// A rotationally symmetric manifold of nonpositive sectional curvature.
#[derive(Clone, Debug)]
pub struct ModelManifold {
    dim: u32,
    warp: Warp,
}

impl ModelManifold {
    /// Builds a manifold and validates the warp.
    ///
    /// Custom warps are rejected when `dpsi`/`d2psi` disagree with finite
    /// differences of `psi` (relative tolerance 1e-5), when the class
    /// requirements `psi(0) = 0`, `psi'(0) = 1`, `psi > 0` fail, or when
    /// `psi'' < 0` somewhere (positive curvature).
    pub fn new(dim: u32, warp: Warp) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidManifold(format!(
                "dimension must be >= 2, got {dim}"
            )));
        }
        if let Warp::Hyperbolic { h } = warp {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::InvalidManifold(format!(
                    "hyperbolic curvature scale must be positive, got {h}"
                )));
            }
        }
        let manifold = ModelManifold { dim, warp };
        manifold.validate_warp()?;
        Ok(manifold)
    }

    pub fn euclidean(dim: u32) -> Result<Self> {
        Self::new(dim, Warp::Euclidean)
    }

    pub fn hyperbolic(dim: u32, h: f64) -> Result<Self> {
        Self::new(dim, Warp::Hyperbolic { h })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn warp(&self) -> &Warp {
        &self.warp
    }

    fn validate_warp(&self) -> Result<()> {
        let Warp::Custom { psi, dpsi, d2psi } = &self.warp else {
            return Ok(());
        };
        let at_zero = psi(0.0);
        if !(at_zero.abs() <= 1e-12) {
            return Err(Error::InvalidManifold(format!(
                "psi(0) = {at_zero}, expected 0"
            )));
        }
        let slope = dpsi(1e-9);
        if !((slope - 1.0).abs() <= 1e-5) {
            return Err(Error::InvalidManifold(format!(
                "psi'(0) = {slope}, expected 1"
            )));
        }
        for r in logspace(1e-3, 10.0, 64) {
            let value = psi(r);
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidManifold(format!(
                    "psi({r}) = {value}, expected positive"
                )));
            }
            let h1 = 1e-6 * r.max(1.0);
            let fd1 = (psi(r + h1) - psi(r - h1)) / (2.0 * h1);
            let d1 = dpsi(r);
            if (fd1 - d1).abs() > 1e-5 * d1.abs().max(fd1.abs()).max(1e-6) {
                return Err(Error::InvalidManifold(format!(
                    "psi'({r}) = {d1} disagrees with finite difference {fd1}"
                )));
            }
            let h2 = 1e-4 * r.max(1.0);
            let fd2 = (psi(r + h2) - 2.0 * value + psi(r - h2)) / (h2 * h2);
            let d2 = d2psi(r);
            if (fd2 - d2).abs() > 1e-5 * d2.abs().max(fd2.abs()).max(1e-6) {
                return Err(Error::InvalidManifold(format!(
                    "psi''({r}) = {d2} disagrees with finite difference {fd2}"
                )));
            }
            if d2 < -1e-10 * (1.0 + value) {
                return Err(Error::InvalidManifold(format!(
                    "psi''({r}) = {d2} < 0: sectional curvature is positive"
                )));
            }
        }
        Ok(())
    }

    /// `psi(r)`.
    pub fn psi(&self, r: f64) -> f64 {
        match &self.warp {
            Warp::Euclidean => r,
            Warp::Hyperbolic { h } => (h * r).sinh() / h,
            Warp::Custom { psi, .. } => psi(r),
        }
    }

    /// `psi'(r)`.
    pub fn dpsi(&self, r: f64) -> f64 {
        match &self.warp {
            Warp::Euclidean => 1.0,
            Warp::Hyperbolic { h } => (h * r).cosh(),
            Warp::Custom { dpsi, .. } => dpsi(r),
        }
    }

    /// `psi''(r)`.
    pub fn d2psi(&self, r: f64) -> f64 {
        match &self.warp {
            Warp::Euclidean => 0.0,
            Warp::Hyperbolic { h } => h * (h * r).sinh(),
            Warp::Custom { d2psi, .. } => d2psi(r),
        }
    }

    /// Boundary area density `psi(r)^(N-1)` of the sphere of radius `r`,
    /// up to the constant angular factor.
    pub fn area(&self, r: f64) -> f64 {
        self.psi(r).powi(self.dim as i32 - 1)
    }

    /// Radial drift `m(r) = (N-1) psi'(r) / psi(r)` of the Laplacian.
    ///
    /// Exactly `(N-1)/r` for the Euclidean warp and
    /// `(N-1) h coth(h r)` for the hyperbolic one. Radii below 1e-12 use
    /// the leading-order expansion `(N-1)/r`.
    pub fn radial_drift(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("drift needs r > 0, got {r}")));
        }
        let nm1 = (self.dim - 1) as f64;
        if r < DRIFT_SERIES_RADIUS {
            return Ok(nm1 / r);
        }
        match &self.warp {
            Warp::Euclidean => Ok(nm1 / r),
            Warp::Hyperbolic { h } => Ok(nm1 * h / (h * r).tanh()),
            Warp::Custom { psi, dpsi, .. } => {
                let denom = psi(r);
                if !(denom > 0.0) {
                    return Err(Error::InvalidManifold(format!(
                        "psi({r}) = {denom} while evaluating the drift"
                    )));
                }
                Ok(nm1 * dpsi(r) / denom)
            }
        }
    }

    /// Radial Ricci curvature `-(N-1) psi''(r) / psi(r)`.
    pub fn ricci_radial(&self, r: f64) -> Result<f64> {
        Ok((self.dim - 1) as f64 * self.sectional_radial(r)?)
    }

    /// Sectional curvature of radial 2-planes, `-psi''(r) / psi(r)`.
    pub fn sectional_radial(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("curvature needs r > 0, got {r}")));
        }
        match &self.warp {
            Warp::Euclidean => Ok(0.0),
            Warp::Hyperbolic { h } => Ok(-h * h),
            Warp::Custom { psi, d2psi, .. } => {
                let denom = psi(r);
                if !(denom > 0.0) {
                    return Err(Error::InvalidManifold(format!(
                        "psi({r}) = {denom} while evaluating curvature"
                    )));
                }
                Ok(-d2psi(r) / denom)
            }
        }
    }

    /// Smallest sampled constant `c` with `(N-1) c >= 1 + sup r * m(r)`
    /// over the unit ball, plus a 5% safety margin.
    ///
    /// The supremum is taken over 1e4 uniform samples of `(0, 1]` together
    /// with the analytic limit `N-1` at the origin. The constant feeds the
    /// quadratic-cap estimate of the glued subsolution.
    pub fn unit_ball_drift_constant(&self) -> Result<f64> {
        const SAMPLES: usize = 10_000;
        let nm1 = (self.dim - 1) as f64;
        let mut sup = nm1; // r -> 0 limit of r * m(r)
        for i in 1..=SAMPLES {
            let r = i as f64 / SAMPLES as f64;
            let value = self.radial_drift(r)? * r;
            if !value.is_finite() {
                return Err(Error::InvalidManifold(format!(
                    "r * m(r) not finite at r = {r}"
                )));
            }
            sup = sup.max(value);
        }
        Ok(1.05 * (1.0 + sup) / nm1)
    }
}

/// Optional curvature hypotheses: `k_lower` is the constant of a lower
/// Ricci bound `Ric >= -(N-1) k^2`, `h_upper` the constant of an upper
/// bound `Ric <= -(N-1) h^2`. The two are independent; each must be
/// positive when present.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBounds {
    pub k_lower: Option<f64>,
    pub h_upper: Option<f64>,
}

impl CurvatureBounds {
    pub fn new(k_lower: Option<f64>, h_upper: Option<f64>) -> Result<Self> {
        for (name, value) in [("k", k_lower), ("h", h_upper)] {
            if let Some(v) = value {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::Contract(format!(
                        "curvature bound {name} must be positive, got {v}"
                    )));
                }
            }
        }
        Ok(CurvatureBounds { k_lower, h_upper })
    }
}

/// Two-sided envelopes on the radial drift implied by curvature bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftEnvelopes {
    /// Upper envelope from the lower Ricci bound: the constant
    /// `(N-1) k coth(k)` for `r >= 1`, the pointwise bound
    /// `(N-1) k coth(k r)` inside the unit ball.
    pub upper: Option<f64>,
    /// Lower envelope from the upper Ricci bound: `(N-1) h coth(h r)`,
    /// itself bounded below by `(N-1) h`.
    pub lower: Option<f64>,
}

/// Evaluates the drift envelopes at radius `r` for dimension `dim`.
pub fn comparison_envelopes(
    bounds: &CurvatureBounds,
    dim: u32,
    r: f64,
) -> Result<DriftEnvelopes> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("envelopes need r > 0, got {r}")));
    }
    if bounds.k_lower.is_none() && bounds.h_upper.is_none() {
        return Err(Error::Contract(
            "at least one curvature bound is required".into(),
        ));
    }
    let nm1 = (dim - 1) as f64;
    let upper = bounds.k_lower.map(|k| nm1 * k / (k * r.min(1.0)).tanh());
    let lower = bounds.h_upper.map(|h| nm1 * h / (h * r).tanh());
    Ok(DriftEnvelopes { upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coth(x: f64) -> f64 {
        1.0 / x.tanh()
    }

    #[test]
    fn euclidean_drift_is_exact() {
        let m = ModelManifold::euclidean(2).unwrap();
        assert_eq!(m.radial_drift(0.5).unwrap(), 2.0);
    }

    #[test]
    fn hyperbolic_drift_limits() {
        let m = ModelManifold::hyperbolic(3, 1.0).unwrap();
        // coth -> 1 at infinity, so the drift approaches (N-1) h.
        assert!((m.radial_drift(50.0).unwrap() - 2.0).abs() < 1e-10);
        // Finite-difference oracle: m(r) = d/dr log(psi^(N-1)).
        let fd = {
            let f = |r: f64| m.area(r).ln();
            let h = 1e-6;
            (f(1.0 + h) - f(1.0 - h)) / (2.0 * h)
        };
        let exact = m.radial_drift(1.0).unwrap();
        assert_relative_eq!(exact, 2.0 * coth(1.0), max_relative = 1e-14);
        assert_relative_eq!(exact, fd, max_relative = 1e-8);
    }

    #[test]
    fn drift_rejects_nonpositive_radius() {
        let m = ModelManifold::euclidean(3).unwrap();
        assert!(matches!(m.radial_drift(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.radial_drift(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn drift_series_near_origin() {
        let m = ModelManifold::hyperbolic(3, 1.0).unwrap();
        for exp in 3..=8 {
            let r = 10f64.powi(-exp);
            let drift = m.radial_drift(r).unwrap();
            assert_relative_eq!(drift * r, 2.0, max_relative = 1e-4);
        }
    }

    #[test]
    fn ricci_values() {
        let eu = ModelManifold::euclidean(3).unwrap();
        assert_eq!(eu.ricci_radial(0.7).unwrap(), 0.0);

        let hy = ModelManifold::hyperbolic(3, 2.0).unwrap();
        assert_relative_eq!(hy.ricci_radial(1.3).unwrap(), -8.0, max_relative = 1e-14);

        // psi = r + r^3 has psi'' = 6r; Ricci = -(N-1) * 6r / (r + r^3).
        let cu = ModelManifold::new(
            2,
            Warp::Custom {
                psi: Arc::new(|r| r + r.powi(3)),
                dpsi: Arc::new(|r| 1.0 + 3.0 * r * r),
                d2psi: Arc::new(|r| 6.0 * r),
            },
        )
        .unwrap();
        assert_relative_eq!(cu.ricci_radial(1.0).unwrap(), -3.0, max_relative = 1e-12);
    }

    #[test]
    fn inconsistent_custom_triple_is_rejected() {
        let bad = ModelManifold::new(
            3,
            Warp::Custom {
                psi: Arc::new(|r| r + r.powi(3)),
                dpsi: Arc::new(|r| 1.0 + 2.0 * r * r), // wrong derivative
                d2psi: Arc::new(|r| 6.0 * r),
            },
        );
        assert!(matches!(bad, Err(Error::InvalidManifold(_))));
    }

    #[test]
    fn positively_curved_custom_is_rejected() {
        // psi = sin r has psi'' < 0: a sphere-like warp.
        let bad = ModelManifold::new(
            3,
            Warp::Custom {
                psi: Arc::new(|r: f64| r.sin()),
                dpsi: Arc::new(|r: f64| r.cos()),
                d2psi: Arc::new(|r: f64| -r.sin()),
            },
        );
        assert!(matches!(bad, Err(Error::InvalidManifold(_))));
    }

    #[test]
    fn drift_dominates_euclidean_rate() {
        let hy = ModelManifold::hyperbolic(3, 0.7).unwrap();
        for r in logspace(1e-2, 30.0, 40) {
            assert!(hy.radial_drift(r).unwrap() >= 2.0 / r - 1e-12);
        }
    }

    #[test]
    fn hyperbolic_drift_equals_lower_envelope() {
        let hy = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let bounds = CurvatureBounds::new(Some(1.0), Some(1.0)).unwrap();
        for r in logspace(0.05, 40.0, 50) {
            let env = comparison_envelopes(&bounds, 3, r).unwrap();
            let drift = hy.radial_drift(r).unwrap();
            assert_relative_eq!(drift, env.lower.unwrap(), max_relative = 1e-13);
            assert!(drift <= env.upper.unwrap() + 1e-12);
        }
    }

    #[test]
    fn envelope_examples() {
        let bounds = CurvatureBounds::new(Some(1.0), None).unwrap();
        let env = comparison_envelopes(&bounds, 3, 2.0).unwrap();
        assert_relative_eq!(env.upper.unwrap(), 2.0 * coth(1.0), max_relative = 1e-14);
        assert!(env.lower.is_none());

        let bounds = CurvatureBounds::new(None, Some(1.0)).unwrap();
        let env = comparison_envelopes(&bounds, 3, 10.0).unwrap();
        let lower = env.lower.unwrap();
        assert!(lower >= 2.0);
        assert_relative_eq!(lower, 2.0 * coth(10.0), max_relative = 1e-8);
    }

    #[test]
    fn envelopes_require_a_bound() {
        let bounds = CurvatureBounds::new(None, None).unwrap();
        assert!(matches!(
            comparison_envelopes(&bounds, 3, 1.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn unit_ball_constant_examples() {
        let eu = ModelManifold::euclidean(3).unwrap();
        let c0 = eu.unit_ball_drift_constant().unwrap();
        assert!(c0 >= 1.5 && c0 <= 1.575 + 1e-12, "c0 = {c0}");

        let hy = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let c0 = hy.unit_ball_drift_constant().unwrap();
        let floor = (1.0 + 2.0 * coth(1.0)) / 2.0;
        assert!(c0 >= floor && c0 <= 1.05 * floor + 1e-9, "c0 = {c0}");

        let hy = ModelManifold::hyperbolic(2, 0.1).unwrap();
        let c0 = hy.unit_ball_drift_constant().unwrap();
        let floor = 1.0 + 0.1 * coth(0.1);
        assert!(c0 >= floor - 1e-9 && c0 <= 1.05 * floor + 1e-9, "c0 = {c0}");
    }

    #[test]
    fn ricci_nonpositive_for_valid_manifolds() {
        let cu = ModelManifold::new(
            3,
            Warp::Custom {
                psi: Arc::new(|r| r + 0.25 * r.powi(3)),
                dpsi: Arc::new(|r| 1.0 + 0.75 * r * r),
                d2psi: Arc::new(|r| 1.5 * r),
            },
        )
        .unwrap();
        for r in logspace(1e-2, 10.0, 30) {
            assert!(cu.ricci_radial(r).unwrap() <= 0.0);
        }
    }
}
