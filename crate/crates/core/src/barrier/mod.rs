//! Explicit barrier profiles: the compactly supported outer profile
//! `u(r, t) = C zeta(t) [1 - (r/a) eta(t)]_+^(1/(m-1))`, the quadratic cap
//! used inside the unit ball of glued subsolutions, and their pointwise
//! residuals `u_t - Lap(u^m) - u^p` computed from closed-form derivatives.

mod profile;

pub use profile::{Horizon, ProfileFamily, TimeProfile, LOG_FAMILY_TAU_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ModelManifold;
use crate::util::pow_pos;

/// Distance (in shape units) from the degenerate set {0, 1} inside which
/// residual evaluation is refused: the residual prefactor carries the
/// power `shape^(1/(m-1) - 1)`, singular at 0 for m > 2.
pub const SHAPE_GUARD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarrierKind {
    /// Outer profile on all of `M`; candidate upper bound.
    OuterSupersolution,
    /// Outer profile glued to a quadratic cap across `r = 1`; candidate
    /// lower bound.
    GluedSubsolution,
}

/// A fully parameterized barrier: amplitude `C`, spatial scale `a`,
/// a time profile, and the reaction exponent `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpec {
    amplitude: f64,
    spatial_scale: f64,
    profile: TimeProfile,
    reaction_exponent: f64,
    kind: BarrierKind,
}

/// Closed-form point derivatives of a barrier, used by the residual and
/// by finite-difference cross-checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierDerivatives {
    /// Time derivative of the profile itself.
    pub du_dt: f64,
    /// Radial derivative of `u^m`.
    pub dum_dr: f64,
    /// Second radial derivative of `u^m`.
    pub d2um_dr2: f64,
}

impl BarrierSpec {
    pub fn new(
        amplitude: f64,
        spatial_scale: f64,
        profile: TimeProfile,
        reaction_exponent: f64,
        kind: BarrierKind,
    ) -> Result<Self> {
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(Error::Contract(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        if !(spatial_scale > 0.0) || !spatial_scale.is_finite() {
            return Err(Error::Contract(format!(
                "spatial scale must be positive, got {spatial_scale}"
            )));
        }
        if !(reaction_exponent > 1.0) {
            return Err(Error::Contract(format!(
                "reaction exponent must exceed 1, got {reaction_exponent}"
            )));
        }
        if kind == BarrierKind::GluedSubsolution {
            // eta is nonincreasing, so the gluing window holds on the whole
            // domain exactly when it holds at t = 0.
            let eta0 = profile.eta(0.0);
            if !(eta0 <= spatial_scale / 2.0) {
                return Err(Error::Contract(format!(
                    "gluing requires eta(0) <= a/2: eta(0) = {eta0}, a = {spatial_scale}"
                )));
            }
        }
        Ok(BarrierSpec {
            amplitude,
            spatial_scale,
            profile,
            reaction_exponent,
            kind,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn spatial_scale(&self) -> f64 {
        self.spatial_scale
    }

    pub fn profile(&self) -> &TimeProfile {
        &self.profile
    }

    pub fn m(&self) -> f64 {
        self.profile.m()
    }

    pub fn p(&self) -> f64 {
        self.reaction_exponent
    }

    pub fn kind(&self) -> BarrierKind {
        self.kind
    }

    /// Outer shape `F(r, t) = 1 - (r/a) eta(t)`.
    pub fn outer_shape(&self, r: f64, t: f64) -> f64 {
        1.0 - r / self.spatial_scale * self.profile.eta(t)
    }

    /// Cap shape `G(r, t) = 1 - eta(t) (r^2 + 1) / (2a)`.
    pub fn cap_shape(&self, r: f64, t: f64) -> f64 {
        1.0 - self.profile.eta(t) / (2.0 * self.spatial_scale) * (r * r + 1.0)
    }

    fn uses_cap(&self, r: f64) -> bool {
        self.kind == BarrierKind::GluedSubsolution && r < 1.0
    }

    /// Barrier value at `(r, t)`; zero outside the support, continuous in `r`.
    pub fn evaluate(&self, r: f64, t: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("barrier needs r >= 0, got {r}")));
        }
        self.profile.require_in_domain(t)?;
        let shape = if self.uses_cap(r) {
            self.cap_shape(r, t)
        } else {
            self.outer_shape(r, t)
        };
        let inv = 1.0 / (self.m() - 1.0);
        Ok(self.amplitude * self.profile.zeta(t) * pow_pos(shape, inv))
    }

    /// Radius `a / eta(t)` where the outer shape vanishes.
    pub fn support_radius(&self, t: f64) -> Result<f64> {
        self.profile.require_in_domain(t)?;
        Ok(self.spatial_scale / self.profile.eta(t))
    }

    fn shape_in_open_interval(&self, shape: f64, r: f64, t: f64) -> Result<()> {
        if shape <= SHAPE_GUARD || shape >= 1.0 - SHAPE_GUARD {
            return Err(Error::Domain(format!(
                "residual needs the shape strictly inside (0, 1); got {shape} at (r, t) = ({r}, {t})"
            )));
        }
        Ok(())
    }

    /// Closed-form derivatives at a point strictly inside the support.
    /// Dispatches to the cap inside the unit ball of glued barriers.
    pub fn derivatives(&self, r: f64, t: f64) -> Result<BarrierDerivatives> {
        if self.uses_cap(r) {
            self.cap_derivatives(r, t)
        } else {
            self.outer_derivatives(r, t)
        }
    }

    /// Derivatives of the outer profile, valid for `0 < F < 1`.
    pub fn outer_derivatives(&self, r: f64, t: f64) -> Result<BarrierDerivatives> {
        self.profile.require_in_domain(t)?;
        let f = self.outer_shape(r, t);
        self.shape_in_open_interval(f, r, t)?;
        let (m, c, a) = (self.m(), self.amplitude, self.spatial_scale);
        let inv = 1.0 / (m - 1.0);
        let (zeta, dzeta) = (self.profile.zeta(t), self.profile.dzeta(t));
        let (eta, deta) = (self.profile.eta(t), self.profile.deta(t));
        let eta_rate = deta / eta;
        let du_dt = c * dzeta * f.powf(inv)
            + c * inv * zeta * eta_rate * (f.powf(inv) - f.powf(inv - 1.0));
        let cm = c.powf(m);
        let dum_dr = -cm * m * inv / a * zeta.powf(m) * eta * f.powf(inv);
        let d2um_dr2 = cm * m * inv * inv / (a * a) * zeta.powf(m) * eta * eta * f.powf(inv - 1.0);
        Ok(BarrierDerivatives {
            du_dt,
            dum_dr,
            d2um_dr2,
        })
    }

    /// Derivatives of the quadratic cap, valid for `0 < G < 1`.
    pub fn cap_derivatives(&self, r: f64, t: f64) -> Result<BarrierDerivatives> {
        self.profile.require_in_domain(t)?;
        let g = self.cap_shape(r, t);
        self.shape_in_open_interval(g, r, t)?;
        let (m, c, a) = (self.m(), self.amplitude, self.spatial_scale);
        let inv = 1.0 / (m - 1.0);
        let (zeta, dzeta) = (self.profile.zeta(t), self.profile.dzeta(t));
        let (eta, deta) = (self.profile.eta(t), self.profile.deta(t));
        let eta_rate = deta / eta;
        let du_dt = c * dzeta * g.powf(inv)
            + c * inv * zeta * eta_rate * (g.powf(inv) - g.powf(inv - 1.0));
        let cm = c.powf(m);
        let dum_dr = -cm * m * inv / a * zeta.powf(m) * eta * r * g.powf(inv);
        let d2um_dr2 = -cm * m * inv / a * zeta.powf(m) * eta * g.powf(inv)
            + cm * m * inv * inv / (a * a) * zeta.powf(m) * eta * eta * r * r * g.powf(inv - 1.0);
        Ok(BarrierDerivatives {
            du_dt,
            dum_dr,
            d2um_dr2,
        })
    }

    /// Pointwise residual `u_t - Lap(u^m) - u^p` at a point strictly inside
    /// the support (shape in the open interval, away from the degenerate
    /// set by `SHAPE_GUARD`). Positive values mean the barrier acts as a
    /// supersolution at that point, negative as a subsolution.
    pub fn residual(&self, manifold: &ModelManifold, r: f64, t: f64) -> Result<f64> {
        Ok(self.residual_with_scale(manifold, r, t)?.0)
    }

    /// Residual together with the sum of the magnitudes of its constituent
    /// terms, which callers use as the local comparison scale.
    pub fn residual_with_scale(
        &self,
        manifold: &ModelManifold,
        r: f64,
        t: f64,
    ) -> Result<(f64, f64)> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("residual needs r > 0, got {r}")));
        }
        let drift = manifold.radial_drift(r)?;
        let d = self.derivatives(r, t)?;
        let u = self.evaluate(r, t)?;
        let reaction = u.powf(self.reaction_exponent);
        let diffusion = d.d2um_dr2 + drift * d.dum_dr;
        let residual = d.du_dt - diffusion - reaction;
        let scale = d.du_dt.abs() + d.d2um_dr2.abs() + (drift * d.dum_dr).abs() + reaction.abs();
        Ok((residual, scale.max(f64::MIN_POSITIVE)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn outer_spec() -> BarrierSpec {
        let profile = TimeProfile::decay_log_power(1.0, 1.0, 2.0, 100.0).unwrap();
        BarrierSpec::new(2.0, 2.0, profile, 3.0, BarrierKind::OuterSupersolution).unwrap()
    }

    #[test]
    fn vanishes_at_free_boundary_and_peaks_at_origin() {
        let spec = outer_spec();
        for t in [0.0, 1.0, 10.0] {
            let edge = spec.support_radius(t).unwrap();
            // At the free boundary the shape vanishes up to roundoff.
            let peak = spec.amplitude() * spec.profile().zeta(t);
            assert!(spec.evaluate(edge, t).unwrap() <= 1e-15 * peak);
            assert_eq!(spec.evaluate(edge * 1.5, t).unwrap(), 0.0);
            let peak = spec.evaluate(0.0, t).unwrap();
            assert_relative_eq!(
                peak,
                spec.amplitude() * spec.profile().zeta(t),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn glued_profile_agrees_across_the_seam() {
        // C = 2, a = 4, m = 2 and eta(0) = 1: both formulas give
        // 2 zeta (1 - 1/4) at r = 1.
        let profile =
            TimeProfile::decay_log_power(1.0, 1.0, 2.0, std::f64::consts::E).unwrap();
        assert_relative_eq!(profile.eta(0.0), 1.0, max_relative = 1e-14);
        let spec = BarrierSpec::new(2.0, 4.0, profile, 3.0, BarrierKind::GluedSubsolution).unwrap();
        let below = spec.evaluate(1.0 - 1e-12, 0.0).unwrap();
        let above = spec.evaluate(1.0 + 1e-12, 0.0).unwrap();
        assert!((below - above).abs() < 1e-12 * below.abs());
        let expected = 2.0 * profile.zeta(0.0) * 0.75;
        assert_relative_eq!(spec.evaluate(1.0, 0.0).unwrap(), expected, max_relative = 1e-13);
    }

    #[test]
    fn gluing_window_enforced_at_construction() {
        let profile =
            TimeProfile::decay_log_power(1.0, 1.0, 2.0, std::f64::consts::E).unwrap();
        // eta(0) = 1 > a/2 for a = 1.5.
        let bad = BarrierSpec::new(2.0, 1.5, profile, 3.0, BarrierKind::GluedSubsolution);
        assert!(matches!(bad, Err(Error::Contract(_))));
    }

    #[test]
    fn support_radius_examples() {
        let log = BarrierSpec::new(
            1.0,
            2.0,
            TimeProfile::decay_log_power(1.0, 1.0, 2.0, std::f64::consts::E).unwrap(),
            3.0,
            BarrierKind::OuterSupersolution,
        )
        .unwrap();
        assert_relative_eq!(log.support_radius(0.0).unwrap(), 2.0, max_relative = 1e-14);

        let blow = BarrierSpec::new(
            1.0,
            1.0,
            TimeProfile::blowup_power(2.0, 0.5, 2.0, 0.25).unwrap(),
            3.0,
            BarrierKind::OuterSupersolution,
        )
        .unwrap();
        let near_end = blow.support_radius(0.25 - 1e-8).unwrap();
        assert_relative_eq!(near_end, 1e4, max_relative = 1e-6);

        let exp = BarrierSpec::new(
            1.0,
            3.0,
            TimeProfile::growth_exp(1.0, 1.0, 2.0, 0.0).unwrap(),
            1.5,
            BarrierKind::OuterSupersolution,
        )
        .unwrap();
        assert_relative_eq!(
            exp.support_radius(1.0).unwrap(),
            3.0 * std::f64::consts::E,
            max_relative = 1e-14
        );
    }

    #[test]
    fn residual_refuses_degenerate_shapes() {
        let spec = outer_spec();
        let manifold = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let edge = spec.support_radius(0.0).unwrap();
        assert!(spec.residual(&manifold, edge, 0.0).is_err());
        assert!(spec.residual(&manifold, edge * (1.0 - 1e-14), 0.0).is_err());
        // Shape exactly 1 at r = 0, and r = 0 is outside the drift domain.
        assert!(spec.residual(&manifold, 0.0, 0.0).is_err());
    }

    #[test]
    fn residual_for_quadratic_nonlinearity_stays_finite_near_full_shape() {
        // For m = 2 the prefactor power 1/(m-1) - 1 vanishes, so the
        // residual approaches a finite limit as the shape tends to 1.
        let spec = outer_spec();
        let manifold = ModelManifold::hyperbolic(3, 1.0).unwrap();
        let t = 1.0;
        let edge = spec.support_radius(t).unwrap();
        let mut last = f64::NAN;
        for frac in [1e-3, 1e-5, 1e-7] {
            let r = edge * frac; // shape close to 1
            last = spec.residual(&manifold, r, t).unwrap();
            assert!(last.is_finite());
        }
        // Compare with the brace evaluated directly at shape -> 1.
        let d = spec.derivatives(edge * 1e-7, t).unwrap();
        let drift = manifold.radial_drift(edge * 1e-7).unwrap();
        let u = spec.evaluate(edge * 1e-7, t).unwrap();
        let direct = d.du_dt - d.d2um_dr2 - drift * d.dum_dr - u.powf(spec.p());
        assert_relative_eq!(last, direct, max_relative = 1e-12);
    }

    #[test]
    fn radially_nonincreasing() {
        let spec = outer_spec();
        for t in [0.0, 2.0, 7.0] {
            let edge = spec.support_radius(t).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..100 {
                let r = edge * 1.1 * i as f64 / 99.0;
                let u = spec.evaluate(r, t).unwrap();
                assert!(u <= prev * (1.0 + 1e-14) + 1e-300);
                prev = u;
            }
        }
    }
}
